#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3density/hilb2.hpp"

namespace k3density {

enum class Verdict { kPotentiallyDense, kEllipticCase, kNotEstablished };

std::string to_string(Verdict v);

/// One link of the certificate chain. Witnesses are ordered key/value
/// pairs, every numeric value rendered as a decimal string.
struct Stage {
    int id;
    std::string name;
    bool pass;
    bool gates_verdict;
    std::string anchor;
    std::vector<std::pair<std::string, std::string>> witnesses;
};

struct VerifyOptions {
    Int search_bound = 200;  // exhaustive cross-check box for the fibration test
    Int y_bound = 10;        // nodal classes listed in the report
    Rat eigen_width = make_rat(1, 1000000);
};

struct DensityReport {
    Int a;
    std::vector<Stage> stages;
    Verdict verdict;
    int failing_stage;  // 0 when no gating stage failed

    // typed extras shared with scan rows
    bool has_nodal;
    bool has_isotropic;  // the surface form represents zero
    std::optional<Int> min_degree_h1;
    std::optional<Int> min_degree_h2;
    RationalInterval top_eigenvalue;

    IntMatrix m1{3, 3}, m2{3, 3}, product{3, 3};
    std::string matrix_note;

    Int search_bound;
    std::int64_t elapsed_us;
};

/// Runs the whole certificate chain for one parameter. Throws
/// std::invalid_argument when |a| < 5.
DensityReport density_verdict(const Int& a, const VerifyOptions& opts = {});

struct ScanRow {
    Int a;
    bool has_nodal;
    bool has_isotropic;
    std::optional<Int> min_degree_h1;
    std::optional<Int> min_degree_h2;
    RationalInterval spectral_radius;
    Verdict verdict;
};

struct ScanResult {
    Int from, to;
    std::vector<ScanRow> rows;
    long dense_count = 0, elliptic_count = 0, not_established_count = 0;
    std::int64_t elapsed_us = 0;
};

/// One row per parameter, deterministic order; rows may be computed
/// concurrently. Requires 5 <= from <= to <= 10000.
ScanResult scan(const Int& from, const Int& to, const VerifyOptions& opts = {});

struct MatrixDump {
    Int a;
    IntMatrix gram{3, 3}, m1{3, 3}, m2{3, 3}, product{3, 3};
    IntPolynomial characteristic;
    Vec3 invariant_vector;
    std::string note;
};

MatrixDump matrix_dump(const Int& a);

// Renderers. JSON is canonical: fixed key order, two-space indent, all
// numbers as decimal strings, so parse + re-dump is byte-identical.
std::string render_report_json(const DensityReport& r);
std::string render_report_text(const DensityReport& r);
std::string render_scan_json(const ScanResult& s);
std::string render_scan_text(const ScanResult& s);
std::string render_matrix_json(const MatrixDump& m);
std::string render_matrix_text(const MatrixDump& m);

}  // namespace k3density
