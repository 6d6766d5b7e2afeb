// Batch front end: JSON problem files in, deterministic JSON reports out.
//
// Exit codes: 0 success (and Regular verdicts), 2 negative verdict or failed
// fixtures, 3 inconclusive, 64 schema/usage error, 65 mathematical
// precondition error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sck/problemio.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sck::SchemaError(path, "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw sck::SchemaError(path, e.what());
    }
}

void write_output(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw sck::SchemaError(out, "cannot open output file");
    f << text;
}

/// Every key/value in `expect` must be present and equal in `actual`;
/// arrays and leaves compare exactly.
bool subset_match(const json& expect, const json& actual) {
    if (expect.is_object()) {
        if (!actual.is_object()) return false;
        for (const auto& [k, v] : expect.items()) {
            if (!actual.contains(k)) return false;
            if (!subset_match(v, actual.at(k))) return false;
        }
        return true;
    }
    return expect == actual;
}

struct FixtureResult {
    std::string name;
    bool pass = false;
    std::string note;
    ordered_json report;
};

FixtureResult run_fixture(const std::filesystem::path& path) {
    FixtureResult res;
    res.name = path.filename().string();
    json fx = read_json_file(path.string());
    std::string command = fx.at("command").get<std::string>();
    json expect = fx.value("expect", json::object());
    int expect_exit = fx.value("expect_exit", 0);
    try {
        sck::Problem problem = sck::parse_problem(fx.at("problem"));
        int code = 0;
        res.report = sck::run_command(command, problem, code);
        json actual = json::parse(res.report.dump());
        if (!subset_match(expect, actual)) {
            res.note = "report does not match expectation";
        } else if (code != expect_exit) {
            res.note = "exit code " + std::to_string(code) + ", expected " +
                       std::to_string(expect_exit);
        } else {
            res.pass = true;
        }
    } catch (const sck::SchemaError& e) {
        res.note = std::string("schema error: ") + e.what();
        res.pass = expect.value("error", "") == "schema";
    } catch (const sck::MathError& e) {
        res.note = std::string("math error: ") + e.what();
        res.pass = expect.value("error", "") == "math";
    }
    return res;
}

int run_fixture_suite(const std::string& dir, const std::string& out) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "no fixtures found in " << dir << "\n";
        return 64;
    }

    ordered_json combined = ordered_json::array();
    bool all_pass = true;
    std::size_t width = 0;
    for (const auto& f : files) width = std::max(width, f.filename().string().size());
    for (const auto& f : files) {
        FixtureResult r = run_fixture(f);
        all_pass = all_pass && r.pass;
        std::cout << r.name << std::string(width + 2 - r.name.size(), ' ')
                  << (r.pass ? "PASS" : "FAIL");
        if (!r.note.empty()) std::cout << "  (" << r.note << ")";
        std::cout << "\n";
        ordered_json entry;
        entry["fixture"] = r.name;
        entry["pass"] = r.pass;
        if (!r.note.empty()) entry["note"] = r.note;
        entry["report"] = r.report;
        combined.push_back(std::move(entry));
    }
    std::cout << (all_pass ? "all fixtures pass\n" : "some fixtures FAILED\n");
    if (!out.empty()) write_output(out, combined.dump(2) + "\n");
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact construction and analysis of graded (skew) Clifford algebras"};
    app.require_subcommand(0);

    std::string command, problem_path, out, strategy, scan;
    unsigned dmax = 0;
    bool fixtures = false;
    app.add_option("command", command,
                   "build | check-regular | mu-rank | factor | count-points | "
                   "point-scheme | hilbert | scan");
    app.add_option("problem", problem_path, "problem JSON file (or fixtures directory)");
    app.add_option("--dmax", dmax, "override the degree bound");
    app.add_option("--strategy", strategy, "count-points strategy: pencil|candidates|scan");
    app.add_option("--scan", scan, "scan field as p,e (e.g. 7,2)");
    app.add_option("--out", out, "write the report to a file instead of stdout");
    app.add_flag("--fixtures", fixtures, "run the shipped fixture suite (directory defaults to ./fixtures)");

    CLI11_PARSE(app, argc, argv);

    // SCK_THREADS caps worker parallelism; every command here runs one
    // sequential computation, so any positive cap is already honored.
    if (const char* t = std::getenv("SCK_THREADS")) {
        if (std::atol(t) < 1) {
            std::cerr << "SCK_THREADS must be a positive integer\n";
            return 64;
        }
    }

    try {
        if (fixtures) {
            std::string dir = command.empty() ? "fixtures" : command;
            return run_fixture_suite(dir, out);
        }
        if (command.empty() || problem_path.empty()) {
            std::cerr << "usage: gsca <command> <problem.json> [flags], or gsca --fixtures [dir]\n";
            return 64;
        }
        json doc = read_json_file(problem_path);
        sck::Problem problem = sck::parse_problem(doc);
        if (app.count("--dmax")) problem.dmax = dmax;
        if (!strategy.empty()) problem.strategy = strategy;
        if (!scan.empty()) {
            std::istringstream ss(scan);
            char comma = ',';
            if (!(ss >> problem.scan_p) || !(ss >> comma) || comma != ',' ||
                !(ss >> problem.scan_e))
                throw sck::SchemaError("--scan", "expected p,e");
            if (problem.strategy == "pencil") problem.strategy = "scan";
        }
        int code = 0;
        ordered_json report = sck::run_command(command, problem, code);
        write_output(out, report.dump(2) + "\n");
        return code;
    } catch (const sck::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 64;
    } catch (const sck::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 65;
    } catch (const sck::MathError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 65;
    }
}
