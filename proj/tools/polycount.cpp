#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

#include "polycount/census.hpp"
#include "polycount/decompose.hpp"
#include "polycount/ritt.hpp"

using namespace polycount;
using ordered_json = nlohmann::ordered_json;

namespace {

// exit codes: 0 success/verified, 1 usage/parse error, 2 algorithmic
// failure verdict / failed verification, 3 budget refusal
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailureVerdict = 2;
constexpr int kBudget = 3;

uint64_t default_budget() {
    if (const char* env = std::getenv("POLYCOUNT_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 1ull << 28;
}

ordered_json dec_to_json(const NormalDecomposition& d) {
    return {{"g", to_string(d.g)}, {"h", to_string(d.h)}};
}

int cmd_decompose(const std::string& field, const std::string& poly_text, int left_degree,
                  const std::string& algorithm, uint64_t budget, bool json, bool verbose) {
    Field F = Field::parse(field);
    Poly f = parse_poly(F, poly_text);
    if (!f.is_monic() || !f.is_original()) {
        std::cerr << "input must be monic and original\n";
        return kUsage;
    }
    std::vector<NormalDecomposition> decs;
    bool failure = false;
    std::vector<std::string> trace;
    if (algorithm == "tame") {
        auto d = tame_decompose(f, left_degree);
        if (d) decs.push_back(*d);
    } else if (algorithm == "wild") {
        auto out = wild_decompose(f, left_degree, verbose ? &trace : nullptr);
        if (out)
            decs = std::move(*out);
        else
            failure = true;
    } else if (algorithm == "brute") {
        decs = brute_decompose(f, left_degree, budget);
    } else {  // auto
        if (left_degree % (int)F.p() != 0) {
            auto d = tame_decompose(f, left_degree);
            if (d) decs.push_back(*d);
        } else {
            auto out = wild_decompose(f, left_degree, verbose ? &trace : nullptr);
            if (out)
                decs = std::move(*out);
            else
                decs = brute_decompose(f, left_degree, budget);
        }
    }
    for (const auto& line : trace) std::cerr << "  " << line << "\n";
    if (json) {
        ordered_json j;
        j["field"] = F.designator();
        j["poly"] = to_string(f);
        j["left_degree"] = left_degree;
        j["verdict"] = failure ? "failure" : "ok";
        ordered_json arr = ordered_json::array();
        for (const auto& d : decs) arr.push_back(dec_to_json(d));
        j["decompositions"] = arr;
        std::cout << j.dump(2) << "\n";
    } else if (failure) {
        std::cout << "failure\n";
    } else if (decs.empty()) {
        std::cout << "indecomposable at this split\n";
    } else {
        for (const auto& d : decs)
            std::cout << "g = " << to_string(d.g) << "   h = " << to_string(d.h) << "\n";
    }
    return failure ? kFailureVerdict : kOk;
}

int cmd_census(const std::string& field, int degree, bool table, bool verify, bool json,
               int workers, uint64_t budget, uint64_t bytes_budget, bool timing) {
    Field F = Field::parse(field);
    CensusOptions opts;
    opts.workers = workers;
    opts.max_compositions = budget;
    opts.max_bytes = bytes_budget;
    opts.verify = verify;
    CensusReport rep = enumerate_decomposables(F, degree, opts);
    if (table)
        std::cout << report_csv_row(rep) << "\n";
    else if (json)
        std::cout << report_json(rep, timing) << "\n";
    else
        std::cout << report_human(rep);
    if (verify && !rep.all_checks_pass) return kFailureVerdict;
    return kOk;
}

int cmd_dickson(const std::string& field, int n, const std::string& z_text) {
    Field F = Field::parse(field);
    Fe z = parse_element(F, z_text);
    std::cout << to_string(dickson(F, n, z)) << "\n";
    return kOk;
}

int cmd_bluher(const std::string& field, int dexp, bool brute_check) {
    Field F = Field::parse(field);
    auto st = bluher_counts(F.p(), F.e(), (uint32_t)dexp);
    std::cout << "q=" << st.q << " r=" << st.r << " z=" << st.z << " gamma=" << st.gamma
              << "\n";
    std::cout << "c=(" << st.c0 << "," << st.c1 << "," << st.c2 << "," << st.c_zplus1
              << ")  for multiplicities (0,1,2," << st.z + 1 << ")\n";
    if (brute_check) {
        uint64_t b0 = 0, b1 = 0, b2 = 0, bz = 0;
        for (uint64_t u = 1; u < F.q(); ++u) {
            int n = count_T(F, (uint32_t)dexp, F.element(u));
            if (n == 0) ++b0;
            else if (n == 1) ++b1;
            else if (n == 2) ++b2;
            else ++bz;
        }
        bool ok = b0 == st.c0 && b1 == st.c1 && b2 == st.c2 && bz == st.c_zplus1;
        std::cout << "brute " << (ok ? "agrees" : "DISAGREES") << ": (" << b0 << "," << b1
                  << "," << b2 << "," << bz << ")\n";
        if (!ok) return kFailureVerdict;
    }
    return kOk;
}

int cmd_ritt_build(const std::string& field, const std::string& ritt_case, int l, int m,
                   const std::string& w_text, const std::string& z_text,
                   const std::string& shift_text) {
    Field F = Field::parse(field);
    Fe shift = shift_text.empty() ? F.zero() : parse_element(F, shift_text);
    CollisionTuple t{Poly(F), Poly(F), Poly(F), Poly(F), Poly(F), l, m};
    if (ritt_case == "first") {
        if (w_text.empty()) throw std::invalid_argument("first case build needs --w");
        Poly w = parse_poly(F, w_text);
        t = first_case_build(F, l, m, FirstCaseParams{w, shift, m % l, m / l});
    } else {
        if (z_text.empty()) throw std::invalid_argument("second case build needs --z");
        t = second_case_build(F, l, m, SecondCaseParams{parse_element(F, z_text), shift});
    }
    std::cout << "f  = " << to_string(t.f) << "\n";
    std::cout << "g  = " << to_string(t.g) << "   h  = " << to_string(t.h) << "\n";
    std::cout << "g* = " << to_string(t.g_star) << "   h* = " << to_string(t.h_star) << "\n";
    return kOk;
}

int cmd_ritt_recover(const std::string& field, const std::string& ritt_case,
                     const std::string& poly_text, int l) {
    Field F = Field::parse(field);
    Poly f = parse_poly(F, poly_text);
    std::string why;
    if (ritt_case == "first") {
        if (l < 2) throw std::invalid_argument("first case recovery needs --l");
        auto params = first_case_recover(f, l, &why);
        if (!params) {
            std::cout << "recovery failed: " << why << "\n";
            return kFailureVerdict;
        }
        std::cout << "w = " << to_string(params->w)
                  << "   shift = " << format_element(F, params->shift) << "   k = " << params->k
                  << "   s = " << params->s << "\n";
    } else {
        auto params = second_case_recover(f, &why);
        if (!params) {
            std::cout << "recovery failed: " << why << "\n";
            return kFailureVerdict;
        }
        std::cout << "z = " << format_element(F, params->z)
                  << "   shift = " << format_element(F, params->shift) << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decomposition, Ritt normal forms, and an exact census of decomposable "
                 "polynomials over finite fields"};
    app.require_subcommand(1);

    std::string field, poly_text, algorithm = "auto", ritt_case = "first", w_text, z_text,
                               shift_text;
    int left_degree = 0, degree = 0, n = 0, dexp = 1, l = 0, workers = 1;
    uint64_t budget = default_budget();
    uint64_t bytes_budget = 1ull << 31;
    bool table = false, verify = false, json = false, verbose = false, brute_check = false,
         timing = false;

    auto* dec = app.add_subcommand("decompose", "all normal decompositions at one degree split");
    dec->add_option("--field", field, "field designator p^e")->required();
    dec->add_option("--poly", poly_text, "monic original input polynomial")->required();
    dec->add_option("--left-degree", left_degree, "degree of the left component")->required();
    dec->add_option("--algorithm", algorithm)
        ->check(CLI::IsMember({"auto", "tame", "wild", "brute"}));
    dec->add_option("--budget", budget, "work budget for brute enumeration");
    dec->add_flag("--json", json);
    dec->add_flag("--verbose", verbose, "print the per-step trace");

    auto* cen = app.add_subcommand("census", "exact count of decomposable polynomials");
    cen->add_option("--field", field)->required();
    cen->add_option("--degree", degree)->required();
    cen->add_flag("--table", table, "emit the reference-table CSV row q,d,count,alpha,ratio");
    cen->add_flag("--verify", verify, "check every applicable bound against the count");
    cen->add_flag("--json", json);
    cen->add_flag("--timing", timing, "include timing in JSON output");
    cen->add_option("--workers", workers);
    cen->add_option("--budget", budget, "composition budget");
    cen->add_option("--bytes-budget", bytes_budget, "dedup storage budget in bytes");

    auto* dik = app.add_subcommand("dickson", "Dickson polynomial T_n(x, z)");
    dik->add_option("--field", field)->required();
    dik->add_option("--n", n)->required();
    dik->add_option("--z", z_text)->required();

    auto* blu = app.add_subcommand("bluher", "root-count statistics of t^{r+1} - ut + u");
    blu->add_option("--field", field)->required();
    blu->add_option("--dexp", dexp, "exponent in r = p^dexp");
    blu->add_flag("--brute-check", brute_check);

    auto* ritt = app.add_subcommand("ritt", "distinct-degree collision normal forms");
    ritt->require_subcommand(1);
    auto* rb = ritt->add_subcommand("build", "build a collision tuple from parameters");
    rb->add_option("--case", ritt_case)->check(CLI::IsMember({"first", "second"}));
    rb->add_option("--field", field)->required();
    rb->add_option("--l", l)->required();
    rb->add_option("--m", degree)->required();
    rb->add_option("--w", w_text, "monic witness polynomial (first case)");
    rb->add_option("--z", z_text, "nonzero Dickson parameter (second case)");
    rb->add_option("--shift", shift_text, "additive shift constant");
    auto* rr = ritt->add_subcommand("recover", "recover parameters from a collision");
    rr->add_option("--case", ritt_case)->check(CLI::IsMember({"first", "second"}));
    rr->add_option("--field", field)->required();
    rr->add_option("--poly", poly_text)->required();
    rr->add_option("--l", l, "left split degree (first case)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (dec->parsed())
            return cmd_decompose(field, poly_text, left_degree, algorithm, budget, json,
                                 verbose);
        if (cen->parsed())
            return cmd_census(field, degree, table, verify, json, workers, budget,
                              bytes_budget, timing);
        if (dik->parsed()) return cmd_dickson(field, n, z_text);
        if (blu->parsed()) return cmd_bluher(field, dexp, brute_check);
        if (ritt->parsed()) {
            if (rb->parsed())
                return cmd_ritt_build(field, ritt_case, l, degree, w_text, z_text, shift_text);
            return cmd_ritt_recover(field, ritt_case, poly_text, l);
        }
    } catch (const budget_error& e) {
        std::cerr << "budget refusal: " << e.what() << "\n";
        return kBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
