#include "k3density/report.hpp"

#include <chrono>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace k3density {

namespace {

using Clock = std::chrono::steady_clock;
using OrderedJson = nlohmann::ordered_json;

std::string str(const Int& n) { return n.get_str(); }

std::string str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string str(bool b) { return b ? "true" : "false"; }

std::string str(const Vec2& v) { return "(" + str(v.first) + ", " + str(v.second) + ")"; }

std::string str(const Vec3& v) {
    return "(" + str(v[0]) + ", " + str(v[1]) + ", " + str(v[2]) + ")";
}

std::string str(const NodalClass& v) { return str(Vec2{v.x, v.y}); }

// exact fixed-point decimal rendering of a rational, rounded toward
// -infinity (floor) or +infinity (ceil) at `digits` decimal places
std::string decimal(const Rat& q, int digits, bool round_up) {
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Rat scaled = q * Rat(scale);
    Int num = scaled.get_num(), den = scaled.get_den();
    Int quot, rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (round_up && rem != 0) quot += 1;
    bool neg = quot < 0;
    Int mag = abs(quot);
    Int ip = mag / scale, fp = mag % scale;
    std::string frac = fp.get_str();
    frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
    return (neg ? "-" : "") + ip.get_str() + "." + frac;
}

std::string interval_text(const RationalInterval& iv, int digits = 5) {
    return "[" + decimal(iv.lower, digits, false) + ", " + decimal(iv.upper, digits, true) + "]";
}

OrderedJson matrix_json(const IntMatrix& m) {
    OrderedJson rows = OrderedJson::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        OrderedJson row = OrderedJson::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(str(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

OrderedJson poly_json(const IntPolynomial& p) {
    OrderedJson coeffs = OrderedJson::array();
    for (const Int& c : p.coeffs()) coeffs.push_back(str(c));
    return coeffs;
}

std::string fibration_status(FibrationStatus s) {
    return s == FibrationStatus::kAnisotropic ? "ANISOTROPIC" : "ISOTROPIC";
}

std::string matrix_discrepancy_note(const Int& a, bool product_matches_published) {
    std::string note =
        "involutions constructed as reflections in H_k - E; the isometry "
        "constraints force entry (2,2) of M1 and M2 to be -3 (transcriptions "
        "showing +3, or iota_2* H_1 with +H_1, fail M^2 = I)";
    if (a == 7) {
        note += product_matches_published
                    ? "; the product M1*M2 equals the published matrix "
                      "[[32,8,13],[-24,-5,-9],[-7,-2,-3]] exactly"
                    : "; WARNING: the product does not match the published matrix";
    }
    return note;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::kPotentiallyDense: return "POTENTIALLY_DENSE";
        case Verdict::kEllipticCase: return "ELLIPTIC_CASE";
        case Verdict::kNotEstablished: return "NOT_ESTABLISHED";
    }
    throw std::logic_error("to_string: bad verdict");
}

DensityReport density_verdict(const Int& a, const VerifyOptions& opts) {
    if (abs(a) < 5)
        throw std::invalid_argument("density_verdict: |a| >= 5 required");
    const auto start = Clock::now();

    SurfaceLattice surf(a);
    Hilb2Lattice lat(a);
    DensityReport rep;
    rep.a = a;
    rep.search_bound = opts.search_bound;

    // stage 1: (-2)-classes exist
    const bool nodal_exist = nodal_classes_exist(surf);
    const auto sample = minimal_nodal_class(surf);
    const auto listed = nodal_classes(surf, opts.y_bound);
    {
        Stage s{1, "nodal classes exist", nodal_exist, true,
                "Prop 1 (existence of (-2)-classes; finiteness of Aut)", {}};
        s.witnesses.emplace_back("exists", str(nodal_exist));
        s.witnesses.emplace_back("minimal_class", sample ? str(*sample) : "none");
        std::string list = "[";
        for (std::size_t i = 0; i < listed.size(); ++i) {
            if (i) list += ", ";
            list += str(listed[i]);
        }
        list += "]";
        s.witnesses.emplace_back("classes_up_to_y_bound", list);
        rep.stages.push_back(std::move(s));
    }
    rep.has_nodal = nodal_exist;

    // stage 2: the surface form does not represent zero
    const auto pencil = has_elliptic_pencil(surf);
    {
        Stage s{2, "no elliptic pencil", !pencil.represents_zero, true,
                "Prop 1 (no elliptic pencil)", {}};
        s.witnesses.emplace_back("disc", str(pencil.disc));
        s.witnesses.emplace_back("floor_sqrt_disc", str(pencil.floor_sqrt_disc));
        s.witnesses.emplace_back("disc_is_square", str(pencil.represents_zero));
        if (pencil.isotropic_vector)
            s.witnesses.emplace_back("isotropic_vector", str(*pencil.isotropic_vector));
        rep.stages.push_back(std::move(s));
    }
    rep.has_isotropic = pencil.represents_zero;

    // stage 3: both generators ample at once
    const auto ample = ample_pair_certificate(surf);
    {
        Stage s{3, "ample pair certificate", ample.pass, true, "Prop 2 (simultaneous ampleness)", {}};
        s.witnesses.emplace_back("asymptotic_witness_8a2_minus_256", str(ample.asymptotic_witness));
        s.witnesses.emplace_back("nodal_classes_exist", str(ample.nodal_classes_exist));
        s.witnesses.emplace_back("finite_checked", str(Int(ample.finite_checked)));
        if (ample.counterexample) {
            const auto& v = *ample.counterexample;
            s.witnesses.emplace_back("counterexample", str(v));
            s.witnesses.emplace_back("counterexample_degrees", str(Vec2{v.deg1, v.deg2}));
        }
        if (!ample.note.empty()) s.witnesses.emplace_back("note", ample.note);
        rep.stages.push_back(std::move(s));
    }

    // stage 4: very ample, no lines, hence two regular involutions
    const auto checklist = very_ample_checklist(surf, 1);
    rep.min_degree_h1 = min_nodal_degree(surf, 1);
    rep.min_degree_h2 = min_nodal_degree(surf, 2);
    {
        Stage s{4, "very ample and line-free", checklist.all_pass(), true,
                "Prop 2 + Corollary 3 (very ampleness; regular involutions)", {}};
        s.witnesses.emplace_back("self_intersection_at_least_4", str(checklist.degree_at_least_four));
        s.witnesses.emplace_back("no_isotropic_classes", str(checklist.no_isotropic_classes));
        s.witnesses.emplace_back("no_nodal_orthogonal_to_hk", str(checklist.no_orthogonal_nodal));
        s.witnesses.emplace_back("no_lines_min_degree_at_least_2", str(checklist.no_lines));
        s.witnesses.emplace_back("min_degree_h1",
                                 rep.min_degree_h1 ? str(*rep.min_degree_h1) : "none");
        s.witnesses.emplace_back("min_degree_h2",
                                 rep.min_degree_h2 ? str(*rep.min_degree_h2) : "none");
        rep.stages.push_back(std::move(s));
    }

    // stage 5: abelian-fibration obstruction (informational: the density
    // argument does not use it; recorded with full certificate)
    const auto fib = abelian_fibration_obstruction(lat, opts.search_bound);
    {
        Stage s{5, "abelian fibration obstruction",
                fib.status == FibrationStatus::kAnisotropic, false,
                "Prop 1(2) (no rational abelian fibration)", {}};
        s.witnesses.emplace_back("status", fibration_status(fib.status));
        s.witnesses.emplace_back("gates_verdict", "false");
        std::string diag = "(" + str(fib.diagnosis.diagonal[0]) + ", " +
                           str(fib.diagnosis.diagonal[1]) + ", " +
                           str(fib.diagnosis.diagonal[2]) + ")";
        s.witnesses.emplace_back("diagonal_model", diag);
        if (!fib.diagnosis.obstructing_places.empty()) {
            std::string places = "[";
            for (std::size_t i = 0; i < fib.diagnosis.obstructing_places.size(); ++i) {
                if (i) places += ", ";
                const Int& p = fib.diagnosis.obstructing_places[i];
                places += (p == -1) ? "real" : str(p);
            }
            places += "]";
            s.witnesses.emplace_back("obstructing_places", places);
        }
        if (fib.diagnosis.zero) s.witnesses.emplace_back("zero", str(*fib.diagnosis.zero));
        s.witnesses.emplace_back("search_bound", str(fib.search_bound));
        s.witnesses.emplace_back("search_found_zero",
                                 fib.search_zero ? str(*fib.search_zero) : "none");
        rep.stages.push_back(std::move(s));
    }

    // stage 6: the invariant class is not effective
    const auto inv = invariant_class(lat);
    {
        Stage s{6, "invariant class not effective", !inv.effective, true,
                "Lemma 5 (invariant class not effective)", {}};
        s.witnesses.emplace_back("invariant_class", str(inv.vector));
        s.witnesses.emplace_back("pairing_with_ample_H1_minus_E", str(inv.pairing_with_ample));
        s.witnesses.emplace_back("verdict", inv.effective ? "POSSIBLY_EFFECTIVE" : "NOT_EFFECTIVE");
        rep.stages.push_back(std::move(s));
    }

    // stage 7: on S^2 H^2, periodicity already means invariance
    const auto action = composed_action(lat, opts.eigen_width);
    rep.top_eigenvalue = action.top_eigenvalue;
    {
        const bool reduces = periodicity_reduces_to_invariance(action.characteristic);
        Stage s{7, "periodicity reduces to invariance", reduces, true,
                "Prop 6 (spectral reduction on S^2 H^2)", {}};
        s.witnesses.emplace_back("char_poly", action.characteristic.to_string());
        s.witnesses.emplace_back("middle_trace", str(action.middle_trace));
        s.witnesses.emplace_back("top_eigenvalue_lower", str(action.top_eigenvalue.lower));
        s.witnesses.emplace_back("top_eigenvalue_upper", str(action.top_eigenvalue.upper));
        rep.stages.push_back(std::move(s));
    }

    // stage 8: the abelian-type surface class moves
    const auto delta = delta_invariance_test(lat);
    {
        Stage s{8, "delta class not invariant", !delta.invariant, true,
                "Prop 6 (intersection computation)", {}};
        s.witnesses.emplace_back("delta_dot_E2", str(delta.on_e_squared));
        s.witnesses.emplace_back("delta_dot_iota2E2", str(delta.on_image_squared));
        s.witnesses.emplace_back("verdict", delta.invariant ? "INVARIANT" : "NOT_INVARIANT");
        rep.stages.push_back(std::move(s));
    }

    // verdict: elliptic surfaces are handled by the alternative argument;
    // otherwise every gating stage must pass
    if (pencil.represents_zero) {
        rep.verdict = Verdict::kEllipticCase;
        rep.failing_stage = 2;
    } else {
        rep.verdict = Verdict::kPotentiallyDense;
        rep.failing_stage = 0;
        for (const auto& s : rep.stages)
            if (s.gates_verdict && !s.pass) {
                rep.verdict = Verdict::kNotEstablished;
                rep.failing_stage = s.id;
                break;
            }
    }

    rep.m1 = beauville_matrix(lat, 1).matrix;
    rep.m2 = beauville_matrix(lat, 2).matrix;
    rep.product = action.matrix;
    const IntMatrix published{{32, 8, 13}, {-24, -5, -9}, {-7, -2, -3}};
    rep.matrix_note = matrix_discrepancy_note(a, rep.product == published);

    rep.elapsed_us =
        std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
    return rep;
}

ScanResult scan(const Int& from, const Int& to, const VerifyOptions& opts) {
    if (from < 5 || from > to || to > 10000)
        throw std::invalid_argument("scan: need 5 <= from <= to <= 10000");
    const auto start = Clock::now();

    const long count = mpz_get_si(Int(to - from + 1).get_mpz_t());
    std::vector<ScanRow> rows(static_cast<std::size_t>(count));

    auto compute = [&](long idx) {
        Int a = from + Int(idx);
        DensityReport r = density_verdict(a, opts);
        rows[static_cast<std::size_t>(idx)] =
            ScanRow{a,        r.has_nodal,      r.has_isotropic, r.min_degree_h1,
                    r.min_degree_h2, r.top_eigenvalue, r.verdict};
    };

    unsigned hw = std::thread::hardware_concurrency();
    unsigned workers = std::min<unsigned>(hw ? hw : 1, 8);
    if (count < 16 || workers <= 1) {
        for (long i = 0; i < count; ++i) compute(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (long i = static_cast<long>(w); i < count; i += workers) compute(i);
            });
        for (auto& t : pool) t.join();
    }

    ScanResult res;
    res.from = from;
    res.to = to;
    res.rows = std::move(rows);
    for (const auto& r : res.rows) {
        switch (r.verdict) {
            case Verdict::kPotentiallyDense: ++res.dense_count; break;
            case Verdict::kEllipticCase: ++res.elliptic_count; break;
            case Verdict::kNotEstablished: ++res.not_established_count; break;
        }
    }
    res.elapsed_us =
        std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
    return res;
}

MatrixDump matrix_dump(const Int& a) {
    if (abs(a) < 5) throw std::invalid_argument("matrix_dump: |a| >= 5 required");
    Hilb2Lattice lat(a);
    MatrixDump d;
    d.a = a;
    d.gram = lat.gram();
    d.m1 = beauville_matrix(lat, 1).matrix;
    d.m2 = beauville_matrix(lat, 2).matrix;
    const auto action = composed_action(lat);
    d.product = action.matrix;
    d.characteristic = action.characteristic;
    d.invariant_vector = action.invariant_vector;
    const IntMatrix published{{32, 8, 13}, {-24, -5, -9}, {-7, -2, -3}};
    d.note = matrix_discrepancy_note(a, d.product == published);
    return d;
}

// ---------------------------------------------------------------------------
// renderers

namespace {

OrderedJson report_json(const DensityReport& r) {
    OrderedJson j;
    j["a"] = str(r.a);
    OrderedJson stages = OrderedJson::array();
    for (const auto& s : r.stages) {
        OrderedJson sj;
        sj["id"] = str(Int(s.id));
        sj["name"] = s.name;
        sj["pass"] = s.pass;
        OrderedJson w;
        for (const auto& [k, v] : s.witnesses) w[k] = v;
        sj["witnesses"] = std::move(w);
        sj["anchor"] = s.anchor;
        stages.push_back(std::move(sj));
    }
    j["stages"] = std::move(stages);
    j["verdict"] = to_string(r.verdict);
    j["failing_stage"] = str(Int(r.failing_stage));
    j["matrices"] = OrderedJson{{"m1", matrix_json(r.m1)},
                                {"m2", matrix_json(r.m2)},
                                {"product", matrix_json(r.product)},
                                {"note", r.matrix_note}};
    j["search_bound"] = str(r.search_bound);
    j["elapsed_us"] = str(Int(r.elapsed_us));
    return j;
}

}  // namespace

std::string render_report_json(const DensityReport& r) { return report_json(r).dump(2) + "\n"; }

std::string render_report_text(const DensityReport& r) {
    std::ostringstream os;
    SurfaceLattice surf(r.a);
    os << "parameter a = " << str(r.a) << "   (disc D = a^2 - 16 = " << str(surf.disc()) << ")\n";
    os << "verdict: " << to_string(r.verdict);
    long passed = 0;
    for (const auto& s : r.stages) passed += s.pass ? 1 : 0;
    os << "   (" << passed << "/" << r.stages.size() << " stages pass";
    if (r.failing_stage != 0) os << ", decided at stage " << r.failing_stage;
    os << ", " << r.elapsed_us / 1000 << "." << (r.elapsed_us % 1000) / 100 << " ms)\n\n";
    for (const auto& s : r.stages) {
        os << " stage " << s.id << "  " << (s.pass ? "pass " : "FAIL ");
        if (!s.gates_verdict) os << "(informational) ";
        os << s.name << "   [" << s.anchor << "]\n";
        for (const auto& [k, v] : s.witnesses) os << "          " << k << " = " << v << "\n";
    }
    os << "\ninvolution matrices (basis H1, E, H2):\n";
    os << "M1 =\n" << r.m1.to_string() << "\n";
    os << "M2 =\n" << r.m2.to_string() << "\n";
    os << "M1*M2 =\n" << r.product.to_string() << "\n";
    os << "note: " << r.matrix_note << "\n";
    return os.str();
}

namespace {

OrderedJson scan_json(const ScanResult& s) {
    OrderedJson j;
    j["from"] = str(s.from);
    j["to"] = str(s.to);
    OrderedJson rows = OrderedJson::array();
    for (const auto& r : s.rows) {
        OrderedJson rj;
        rj["a"] = str(r.a);
        rj["has_nodal"] = r.has_nodal;
        rj["has_isotropic"] = r.has_isotropic;
        rj["min_degree_h1"] = r.min_degree_h1 ? str(*r.min_degree_h1) : "none";
        rj["min_degree_h2"] = r.min_degree_h2 ? str(*r.min_degree_h2) : "none";
        rj["spectral_radius_lower"] = str(r.spectral_radius.lower);
        rj["spectral_radius_upper"] = str(r.spectral_radius.upper);
        rj["verdict"] = to_string(r.verdict);
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    j["summary"] = OrderedJson{{"rows", str(Int(static_cast<long>(s.rows.size())))},
                               {"POTENTIALLY_DENSE", str(Int(s.dense_count))},
                               {"ELLIPTIC_CASE", str(Int(s.elliptic_count))},
                               {"NOT_ESTABLISHED", str(Int(s.not_established_count))}};
    j["elapsed_us"] = str(Int(s.elapsed_us));
    return j;
}

}  // namespace

std::string render_scan_json(const ScanResult& s) { return scan_json(s).dump(2) + "\n"; }

std::string render_scan_text(const ScanResult& s) {
    std::ostringstream os;
    os << "     a  nodal  isotropic  min_deg  spectral_radius         verdict\n";
    for (const auto& r : s.rows) {
        std::string a = str(r.a);
        os << std::string(a.size() < 6 ? 6 - a.size() : 0, ' ') << a;
        os << "  " << (r.has_nodal ? "yes " : "no  ");
        os << "  " << (r.has_isotropic ? "yes      " : "no       ");
        std::string md = r.min_degree_h1 ? str(*r.min_degree_h1) : "-";
        os << "  " << md << std::string(md.size() < 7 ? 7 - md.size() : 1, ' ');
        std::string iv = interval_text(r.spectral_radius);
        os << iv << std::string(iv.size() < 24 ? 24 - iv.size() : 1, ' ');
        os << to_string(r.verdict) << "\n";
    }
    os << "summary: " << s.rows.size() << " rows | POTENTIALLY_DENSE: " << s.dense_count
       << " | ELLIPTIC_CASE: " << s.elliptic_count
       << " | NOT_ESTABLISHED: " << s.not_established_count << "\n";
    return os.str();
}

namespace {

OrderedJson matrix_dump_json(const MatrixDump& m) {
    OrderedJson j;
    j["a"] = str(m.a);
    j["gram"] = matrix_json(m.gram);
    j["m1"] = matrix_json(m.m1);
    j["m2"] = matrix_json(m.m2);
    j["product"] = matrix_json(m.product);
    j["char_poly"] = m.characteristic.to_string();
    j["char_poly_coeffs"] = poly_json(m.characteristic);
    j["invariant_vector"] = str(m.invariant_vector);
    j["note"] = m.note;
    return j;
}

}  // namespace

std::string render_matrix_json(const MatrixDump& m) { return matrix_dump_json(m).dump(2) + "\n"; }

std::string render_matrix_text(const MatrixDump& m) {
    std::ostringstream os;
    os << "parameter a = " << str(m.a) << "  (basis H1, E, H2)\n\n";
    os << "gram =\n" << m.gram.to_string() << "\n\n";
    os << "M1 =\n" << m.m1.to_string() << "\n\n";
    os << "M2 =\n" << m.m2.to_string() << "\n\n";
    os << "M1*M2 =\n" << m.product.to_string() << "\n\n";
    os << "char poly: " << m.characteristic.to_string() << "\n";
    os << "invariant vector: " << str(m.invariant_vector) << "\n";
    os << "note: " << m.note << "\n";
    return os.str();
}

}  // namespace k3density
