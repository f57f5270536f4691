#include <json.hpp>

#include "polycount/census.hpp"

namespace polycount {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string q_str(const mpq_class& v) {
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

}  // namespace

std::string decimal_ratio(const mpz_class& num, const mpz_class& den, int places) {
    if (den == 0) return "nan";
    mpz_class n = num, d = den;
    bool negative = (n < 0) != (d < 0);
    n = abs(n);
    d = abs(d);
    mpz_class scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    mpz_class whole = n / d;
    mpz_class frac = (n % d) * scale / d;  // truncated
    std::string fs = frac.get_str();
    while ((int)fs.size() < places) fs = "0" + fs;
    return (negative ? "-" : "") + whole.get_str() + "." + fs;
}

std::string report_json(const CensusReport& r, bool include_timing) {
    ordered_json j;
    j["field"] = r.field_designator;
    j["q"] = r.q;
    j["p"] = r.p;
    j["e"] = r.e;
    j["d"] = r.d;
    j["count"] = r.total.get_str();
    j["monic_original_count"] = r.monic_original.get_str();
    j["alpha"] = r.alpha_value.get_str();
    j["ratio"] = decimal_ratio(r.total, r.alpha_value);
    j["beta"] = q_str(r.beta_value);
    j["beta_star"] = q_str(r.beta_star_value);
    j["dim"] = r.dim ? ordered_json(*r.dim) : ordered_json(nullptr);
    j["leaf"] = r.leaf;
    j["second_normalized_enumeration"] = r.second_normalized;
    j["compositions"] = r.compositions;
    ordered_json splits = ordered_json::array();
    for (const auto& s : r.splits) {
        ordered_json js;
        js["left_degree"] = s.left_degree;
        js["count"] = s.count.get_str();
        js["monic_original_count"] = s.monic_original.get_str();
        js["pairs_enumerated"] = s.pairs_enumerated;
        js["distinct_enumerated"] = s.distinct_enumerated;
        ordered_json hist = ordered_json::array();
        for (auto [mult, cnt] : s.multiplicity_histogram)
            hist.push_back({{"decompositions", mult}, {"compositions", cnt}});
        js["multiplicity_histogram"] = hist;
        splits.push_back(js);
    }
    j["splits"] = splits;
    j["frobenius_count"] = r.frobenius_enumerated.get_str();
    j["frobenius_formula"] = r.frobenius_formula.get_str();
    if (r.has_intersection) {
        j["intersection"]["l"] = r.intersection_l;
        j["intersection"]["full"] = r.intersection_full.get_str();
        j["intersection"]["non_frobenius"] = r.intersection_nonfrob.get_str();
    }
    if (!r.checks.empty()) {
        ordered_json checks = ordered_json::array();
        for (const auto& c : r.checks)
            checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        j["checks"] = checks;
        j["all_checks_pass"] = r.all_checks_pass;
    }
    j["workers"] = r.workers;
    if (include_timing) j["seconds"] = r.seconds;
    return j.dump(2);
}

std::string report_csv_row(const CensusReport& r) {
    return std::to_string(r.q) + "," + std::to_string(r.d) + "," + r.total.get_str() + "," +
           r.alpha_value.get_str() + "," + decimal_ratio(r.total, r.alpha_value);
}

std::string report_human(const CensusReport& r) {
    std::string s;
    s += "census over GF(" + r.field_designator + "), degree " + std::to_string(r.d) + "\n";
    s += "  #D_d            = " + r.total.get_str() + "\n";
    s += "  monic original  = " + r.monic_original.get_str() + "\n";
    s += "  alpha_d         = " + r.alpha_value.get_str() + "\n";
    s += "  ratio           = " + decimal_ratio(r.total, r.alpha_value) + "\n";
    s += "  beta, beta*     = " + q_str(r.beta_value) + ", " + q_str(r.beta_star_value) + "\n";
    s += "  dim D_d         = " + (r.dim ? std::to_string(*r.dim) : std::string("empty")) + "\n";
    s += "  leaf            = " + r.leaf + "\n";
    for (const auto& sp : r.splits)
        s += "  split e=" + std::to_string(sp.left_degree) + "  #D_{d,e} = " +
             sp.count.get_str() + "\n";
    s += "  frobenius       = " + r.frobenius_enumerated.get_str() + " (formula " +
         r.frobenius_formula.get_str() + ")\n";
    if (r.has_intersection) {
        s += "  intersection(l=" + std::to_string(r.intersection_l) + ") = " +
             r.intersection_full.get_str() + ", non-Frobenius " +
             r.intersection_nonfrob.get_str() + "\n";
    }
    for (const auto& c : r.checks)
        s += std::string("  [") + (c.pass ? "PASS" : "FAIL") + "] " + c.name + ": " + c.detail +
             "\n";
    s += "  time " + std::to_string(r.seconds) + " s, workers " + std::to_string(r.workers) +
         ", compositions " + std::to_string(r.compositions) + "\n";
    return s;
}

}  // namespace polycount
