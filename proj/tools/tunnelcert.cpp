// Command-line front end: validate patterns, run certification, print
// thresholds. Exit codes: 0 success/tunnel, 2 validation violations,
// 3 inconclusive, 64 usage error, 65 parse or validation hard error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tunnelcert/criteria.hpp"
#include "tunnelcert/oracle.hpp"

namespace {

constexpr int kExitViolations = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int check_thread_env() {
    const char* env = std::getenv("TUNNELCERT_THREADS");
    if (!env) return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v <= 0) {
        std::cerr << "TUNNELCERT_THREADS must be a positive integer\n";
        return kExitUsage;
    }
    return 0;  // evaluation is currently single-threaded; the cap is a no-op
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certify vertical geodesics as unknotting tunnels from "
                 "ball-and-beam patterns"};
    app.require_subcommand(1);

    std::string val_path;
    CLI::App* validate = app.add_subcommand("validate", "check a pattern file");
    validate->add_option("file", val_path, "pattern file")->required();

    std::string cert_path, report_path, format = "text";
    int n_max = 6, window = 2;
    double tol = tunnelcert::kDefaultTol;
    CLI::App* certify = app.add_subcommand("certify", "run the certification rules");
    certify->add_option("file", cert_path, "pattern file")->required();
    certify->add_option("--n-max", n_max, "largest bracelet length searched")
        ->check(CLI::Range(3, 1000000));
    certify->add_option("--window", window, "lattice offset window")
        ->check(CLI::Range(0, 1000000));
    certify->add_option("--tol", tol, "geometric tolerance")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), 1e-3));
    certify->add_option("--report", report_path, "write the certificate here");
    certify->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* thresholds = app.add_subcommand("thresholds", "print the length bounds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (const int rc = check_thread_env()) return rc;

    if (thresholds->parsed()) {
        const tunnelcert::Thresholds t = tunnelcert::compute_thresholds();
        std::cout << "prop4 " << fmt10(t.t4) << "\n";
        std::cout << "prop5 " << fmt10(t.t5) << "\n";
        std::cout << "elder " << fmt10(t.t_es) << "\n";
        return 0;
    }

    if (validate->parsed()) {
        tunnelcert::BallBeamPattern p;
        try {
            p = tunnelcert::parse_pattern(read_file(val_path));
        } catch (const std::exception& e) {
            std::cerr << val_path << ": " << e.what() << "\n";
            return kExitData;
        }
        const tunnelcert::ValidationReport rep = tunnelcert::validate_pattern(p);
        if (rep.clean()) {
            std::cout << "clean (window " << rep.window << ")\n";
            return 0;
        }
        for (const auto& v : rep.violations) std::cout << v.message << "\n";
        return kExitViolations;
    }

    // certify
    tunnelcert::BallBeamPattern p;
    try {
        p = tunnelcert::parse_pattern(read_file(cert_path), tol);
    } catch (const std::exception& e) {
        std::cerr << cert_path << ": " << e.what() << "\n";
        return kExitData;
    }
    const tunnelcert::ValidationReport rep = tunnelcert::validate_pattern(p, window, tol);
    if (!rep.clean()) {
        for (const auto& v : rep.violations) std::cerr << cert_path << ": " << v.message << "\n";
        return kExitData;
    }

    tunnelcert::CertifyOptions opt;
    opt.n_max = n_max;
    opt.window = window;
    opt.tol = tol;
    tunnelcert::Certificate cert;
    try {
        cert = tunnelcert::certify(p, opt);
    } catch (const std::exception& e) {
        std::cerr << cert_path << ": " << e.what() << "\n";
        return kExitData;
    }
    const std::string json = tunnelcert::serialize_certificate(cert, p);

    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write '" << report_path << "'\n";
            return kExitData;
        }
        out << json;
    }

    if (format == "json") {
        std::cout << json;
    } else {
        std::cout << "verdict: " << (cert.tunnel ? "tunnel" : "inconclusive") << "\n";
        if (cert.rule) std::cout << "rule: " << tunnelcert::rule_name(*cert.rule) << "\n";
        std::cout << "g: " << tunnelcert::detail::fmt17(cert.g) << "\n";
        if (cert.bracelet) {
            std::cout << "bracelet: n=" << cert.bracelet->n << " [";
            for (size_t i = 0; i < cert.bracelet->chain.size(); ++i) {
                if (i) std::cout << " ";
                const auto& [bi, off] = cert.bracelet->chain[i];
                std::cout << p.balls[bi].id << "(" << off[0] << "," << off[1] << ")";
            }
            std::cout << "]\n";
        }
        for (const auto& r : cert.reasons) std::cout << "  " << r << "\n";
    }
    return cert.tunnel ? 0 : kExitInconclusive;
}
