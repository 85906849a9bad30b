// Command-line front end: exact verification of the density certificate
// chain for the lattices b_a, single parameters or ranges, text or JSON.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "k3density/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;

struct CommonFlags {
    std::string format = "text";
    long search_bound = 200;
    long y_bound = 10;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--format", flags.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    cmd->add_option("--search-bound", flags.search_bound,
                    "box bound for the exhaustive fibration cross-check")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--y-bound", flags.y_bound, "list nodal classes with |y| up to this bound")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

k3density::VerifyOptions to_options(const CommonFlags& flags) {
    k3density::VerifyOptions opts;
    opts.search_bound = flags.search_bound;
    opts.y_bound = flags.y_bound;
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact certificate chains for Hilbert-square automorphism dynamics "
                 "on the lattices b_a(x,y) = 4x^2 + 2axy + 4y^2"};
    app.require_subcommand(1);

    long a = 0;
    long from = 0, to = 0;
    CommonFlags verify_flags, scan_flags, matrix_flags;

    CLI::App* verify = app.add_subcommand("verify", "run the full certificate chain for one a");
    verify->add_option("--a", a, "lattice parameter, |a| >= 5")->required();
    add_common(verify, verify_flags);

    CLI::App* scan_cmd = app.add_subcommand("scan", "tabulate verdicts over a range of a");
    scan_cmd->add_option("--from", from, "first a (>= 5)")->required();
    scan_cmd->add_option("--to", to, "last a (<= 10000)")->required();
    add_common(scan_cmd, scan_flags);

    CLI::App* matrix = app.add_subcommand("matrix", "print the involution matrices and spectrum");
    matrix->add_option("--a", a, "lattice parameter, |a| >= 5")->required();
    add_common(matrix, matrix_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints the message; 0 for --help
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (verify->parsed()) {
            if (std::abs(a) < 5) {
                std::cerr << "error: invalid a = " << a << " (the constraint is |a| >= 5)\n";
                return kExitInvalidInput;
            }
            auto report = k3density::density_verdict(k3density::Int(a), to_options(verify_flags));
            std::cout << (verify_flags.format == "json" ? k3density::render_report_json(report)
                                                        : k3density::render_report_text(report));
            return kExitOk;
        }
        if (scan_cmd->parsed()) {
            if (from < 5 || from > to || to > 10000) {
                std::cerr << "error: invalid range [" << from << ", " << to
                          << "] (need 5 <= from <= to <= 10000)\n";
                return kExitInvalidInput;
            }
            auto result = k3density::scan(k3density::Int(from), k3density::Int(to),
                                          to_options(scan_flags));
            std::cout << (scan_flags.format == "json" ? k3density::render_scan_json(result)
                                                      : k3density::render_scan_text(result));
            return kExitOk;
        }
        if (matrix->parsed()) {
            if (std::abs(a) < 5) {
                std::cerr << "error: invalid a = " << a << " (the constraint is |a| >= 5)\n";
                return kExitInvalidInput;
            }
            auto dump = k3density::matrix_dump(k3density::Int(a));
            std::cout << (matrix_flags.format == "json" ? k3density::render_matrix_json(dump)
                                                        : k3density::render_matrix_text(dump));
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        throw;
    }
    return kExitInvalidInput;
}
