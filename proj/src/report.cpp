#include "bayestab/report.hpp"

#include <cmath>

namespace bayestab {

namespace {

// JSON has no inf/nan literals; encode them as strings.
Json num(double v) {
    if (std::isnan(v)) return Json("nan");
    if (std::isinf(v)) return Json(v > 0 ? "inf" : "-inf");
    return Json(v);
}

}  // namespace

Json to_json(const TestReport& r) {
    Json j;
    j["method"] = r.method;
    j["statistic"] = num(r.statistic);
    j["statistic_se"] = num(r.statistic_se);
    j["p_value"] = num(r.p_value);
    j["p_value_se"] = num(r.p_value_se);
    j["qualifying_count"] = r.qualifying_count;
    j["table_count"] = r.table_count;
    j["seed"] = r.seed;
    j["n_samples"] = r.n_samples;
    j["n_null"] = r.n_null;
    if (!std::isnan(r.total_probability)) j["total_probability"] = num(r.total_probability);
    j["wall_clock_seconds"] = r.wall_clock_seconds;
    return j;
}

Json to_json(const EventEstimate& e) {
    Json j;
    j["estimate"] = num(e.estimate);
    j["std_error"] = num(e.std_error);
    j["n_samples"] = e.n_samples;
    j["seed"] = e.seed;
    return j;
}

Json to_json(const ArmSummary& a) {
    Json j;
    j["mean_p"] = num(a.mean_p);
    j["mean_p_se"] = num(a.mean_p_se);
    j["median_p"] = num(a.median_p);
    j["median_p_se"] = num(a.median_p_se);
    j["frac_below_10"] = num(a.frac_below_10);
    j["frac_below_10_se"] = num(a.frac_below_10_se);
    j["frac_below_05"] = num(a.frac_below_05);
    j["frac_below_05_se"] = num(a.frac_below_05_se);
    return j;
}

Json to_json(const PowerSummary& p) {
    Json j;
    j["gamma_arm"] = to_json(p.gamma_arm);
    j["posterior_arm"] = to_json(p.posterior_arm);
    j["n_realizations"] = p.n_realizations;
    j["seed"] = p.seed;
    return j;
}

Json to_json(const GaussianDemoResult& g) {
    Json j;
    j["lrt_power"] = num(g.lrt_power);
    j["lrt_power_se"] = num(g.lrt_power_se);
    j["bayes_power"] = num(g.bayes_power);
    j["bayes_power_se"] = num(g.bayes_power_se);
    j["chi2_critical"] = num(g.chi2_critical);
    j["z_critical"] = num(g.z_critical);
    j["bayes_power_closed_form"] = num(g.bayes_power_closed_form);
    return j;
}

}  // namespace bayestab
