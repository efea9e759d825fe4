#include "cutproj/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "cutproj/almost_periods.hpp"
#include "cutproj/error.hpp"
#include "cutproj/io.hpp"

namespace cutproj {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    a.push_back(v[i]);
  return a;
}

json to_json(const IntVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    a.push_back(v[i]);
  return a;
}

json to_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

json to_json(const Box& b) { return {{"lo", to_json(b.lo())}, {"hi", to_json(b.hi())}}; }

class Context {
public:
  Context(const RunConfig& cfg, const RunOptions& opts)
    : cfg_(cfg),
      scheme_(validate_scheme(cfg.d, cfg.m, make_basis(cfg.basis), cfg.validation)),
      decoration_(Decoration::make(scheme_, cfg.decoration)),
      dir_(opts.out_dir.value_or(cfg.output.directory)) {
    const auto& v = scheme_.validation();
    if (!v.denseness_ok)
      warnings_.push_back(
          "star images missed " + std::to_string(v.cells_total - v.cells_hit) + " of " +
          std::to_string(v.cells_total) + " coverage cells; the internal image may not be dense" +
          (v.denseness_overridden ? " (continuing: assume_dense is set)" : ""));
  }

  const RunConfig& cfg() const { return cfg_; }
  const SchemeSpec& scheme() const { return scheme_; }
  const Decoration& decoration() const { return decoration_; }
  const WeightFunction& weight() const { return cfg_.weight; }

  WeightedComb comb(const Box& box) const {
    const auto& sp = cfg_.spectral;
    if (sp.xi_s)
      return hull_element(scheme_, weight(), decoration_, torus_point(scheme_, *sp.xi_s, *sp.xi_k),
                          box, cfg_.thresholds.eps_trunc);
    return generate_comb(scheme_, weight(), decoration_, box, cfg_.thresholds.eps_trunc);
  }

  TorusPoint xi() const {
    const auto& sp = cfg_.spectral;
    if (sp.xi_s)
      return torus_point(scheme_, *sp.xi_s, *sp.xi_k);
    return torus_point(scheme_, Vector::Zero(cfg_.d), Vector::Zero(cfg_.m));
  }

  double peak_cut() const {
    if (cfg_.thresholds.internal_cut)
      return *cfg_.thresholds.internal_cut;
    return peak_internal_cut(scheme_, weight(), decoration_, cfg_.thresholds.intensity_floor);
  }

  double autocorr_cut() const {
    if (cfg_.thresholds.autocorr_cut)
      return *cfg_.thresholds.autocorr_cut;
    return autocorr_internal_cut(scheme_, weight(), decoration_, cfg_.thresholds.intensity_floor);
  }

  std::string path(const std::string& name) {
    fs::create_directories(dir_);
    return (fs::path(dir_) / name).string();
  }

  void write_json(const std::string& name, const json& j) {
    if (!cfg_.output.json)
      return;
    std::string p = path(name);
    std::ofstream out(p, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out)
      fail(ErrorKind::IoError, "write to " + p + " failed");
    files_.push_back(p);
  }

  bool csv() const { return cfg_.output.csv; }
  void note_file(const std::string& p) { files_.push_back(p); }
  const std::vector<std::string>& files() const { return files_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

private:
  const RunConfig& cfg_;
  SchemeSpec scheme_;
  Decoration decoration_;
  std::string dir_;
  std::vector<std::string> files_;
  std::vector<std::string> warnings_;
};

json certificate_json(const SchemeSpec& scheme) {
  const auto& v = scheme.validation();
  json dual = json::array();
  for (int j = 0; j < scheme.dim(); ++j)
    dual.push_back(to_json(Vector(scheme.dual().column(j))));
  return {{"d", scheme.d()},
          {"m", scheme.m()},
          {"covolume", scheme.covolume()},
          {"dual_columns", dual},
          {"injectivity_ok", v.injectivity_ok},
          {"search_radius", v.search_radius},
          {"denseness_ok", v.denseness_ok},
          {"coverage_eps", v.coverage_eps},
          {"cells_total", v.cells_total},
          {"cells_hit", v.cells_hit},
          {"denseness_overridden", v.denseness_overridden}};
}

int cmd_validate(Context& ctx, json& summary) {
  json j = certificate_json(ctx.scheme());
  if (!ctx.weight().non_smooth()) {
    auto cert = admissibility_certificate(ctx.weight(), ctx.scheme());
    j["admissibility"] = {{"C", cert.decay.C},
                          {"alpha", cert.decay.alpha},
                          {"sampled_max", cert.sampled_max},
                          {"tail_constant", cert.tail_constant}};
  } else {
    j["admissibility"] = nullptr;
  }
  j["weight"] = ctx.weight().describe();
  ctx.write_json("validation.json", j);
  summary["certificate"] = j;
  return exit_ok;
}

int cmd_generate(Context& ctx, json& summary) {
  WeightedComb comb = ctx.comb(ctx.cfg().boxes.largest());
  if (ctx.csv()) {
    std::string p = ctx.path("comb.csv");
    write_comb_csv(p, comb);
    ctx.note_file(p);
  }
  summary["atoms"] = comb.atoms.size();
  summary["physical_box"] = to_json(comb.physical_box);
  summary["internal_radius"] = comb.internal_radius;
  summary["trunc_eps"] = comb.trunc_eps;
  return exit_ok;
}

int cmd_density(Context& ctx, json& summary) {
  Complex closed = density_closed(ctx.scheme(), ctx.weight(), ctx.decoration());
  auto boxes = ctx.cfg().boxes.boxes();
  auto values = weyl_average(ctx.scheme(), ctx.weight(), ctx.decoration(), ctx.xi(),
                             ctx.cfg().boxes, ctx.cfg().thresholds.eps_trunc);
  json seq = json::array();
  for (std::size_t i = 0; i < values.size(); ++i)
    seq.push_back({{"box_volume", boxes[i].volume()}, {"value", to_json(values[i])}});
  json j = {{"closed", to_json(closed)}, {"weyl", seq}};
  ctx.write_json("density.json", j);
  summary["density"] = j;
  return exit_ok;
}

int cmd_autocorr(Context& ctx, json& summary) {
  double cut = ctx.autocorr_cut();
  auto table = autocorr_closed(ctx.scheme(), ctx.weight(), ctx.decoration(),
                               ctx.cfg().spectral.displacement_range, cut);
  if (ctx.csv()) {
    std::string p = ctx.path("autocorrelation.csv");
    write_autocorr_csv(p, table, ctx.scheme().d(), ctx.scheme().dim());
    ctx.note_file(p);
  }
  summary["entries"] = table.entries.size();
  summary["internal_cut"] = cut;
  summary["normalization"] = table.normalization;
  return exit_ok;
}

int cmd_diffract(Context& ctx, json& summary) {
  double cut = ctx.peak_cut();
  auto peaks = diffraction_peaks(ctx.scheme(), ctx.weight(), ctx.decoration(),
                                 ctx.cfg().spectral.k_range, cut,
                                 ctx.cfg().thresholds.intensity_floor);
  if (ctx.csv()) {
    std::string p = ctx.path("peaks.csv");
    write_peaks_csv(p, peaks, ctx.scheme().d(), ctx.scheme().m());
    ctx.note_file(p);
  }
  summary["peaks"] = peaks.peaks.size();
  summary["internal_cut"] = cut;
  summary["intensity_floor"] = peaks.intensity_floor;
  return exit_ok;
}

int cmd_fourier_bohr(Context& ctx, json& summary) {
  const auto& cfg = ctx.cfg();
  std::vector<Vector> ks = cfg.spectral.fourier_bohr_k;
  std::vector<std::optional<double>> closed(ks.size());
  if (ks.empty()) {
    auto peaks = diffraction_peaks(ctx.scheme(), ctx.weight(), ctx.decoration(),
                                   cfg.spectral.k_range, ctx.peak_cut(),
                                   cfg.thresholds.intensity_floor);
    for (std::size_t i = 0; i < peaks.peaks.size() && static_cast<int>(i) < cfg.spectral.top_peaks;
         ++i) {
      ks.push_back(peaks.peaks[i].k);
      closed.push_back(peaks.peaks[i].intensity);
    }
  }
  WeightedComb comb = ctx.comb(cfg.boxes.largest());
  auto boxes = cfg.boxes.boxes();
  json list = json::array();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    auto est = fourier_bohr_estimate(comb, ks[i], cfg.boxes);
    json seq = json::array();
    for (std::size_t b = 0; b < est.size(); ++b)
      seq.push_back({{"box_volume", boxes[b].volume()},
                     {"value", to_json(est[b])},
                     {"modulus2", std::norm(est[b])}});
    json item = {{"k", to_json(ks[i])}, {"estimates", seq}};
    item["closed_intensity"] = closed[i] ? json(*closed[i]) : json(nullptr);
    list.push_back(item);
  }
  ctx.write_json("fourier_bohr.json", list);
  summary["frequencies"] = ks.size();
  return exit_ok;
}

int cmd_almost_periods(Context& ctx, json& summary) {
  const auto& cfg = ctx.cfg();
  AlmostPeriodOptions opts;
  opts.eps_trunc = cfg.thresholds.eps_trunc;
  auto res = almost_periods(ctx.scheme(), ctx.weight(), ctx.decoration(),
                            cfg.thresholds.almost_period_eps, cfg.spectral.kernel_scale,
                            cfg.spectral.almost_period_box, opts);
  json periods = json::array();
  for (const auto& p : res.periods)
    periods.push_back(
        {{"t", to_json(p.t)}, {"z", to_json(p.z)}, {"verified_sup", p.verified_sup}});
  json j = {{"eps", cfg.thresholds.almost_period_eps},
            {"kernel_scale", cfg.spectral.kernel_scale},
            {"delta", res.delta},
            {"fourier_sum", res.fourier_sum},
            {"candidates", res.candidates},
            {"grid_spacing", res.grid_spacing},
            {"max_gap", std::isfinite(res.max_gap) ? json(res.max_gap) : json(nullptr)},
            {"periods", periods}};
  ctx.write_json("almost_periods.json", j);
  summary["verified"] = res.periods.size();
  summary["candidates"] = res.candidates;
  summary["max_gap"] = j["max_gap"];
  return exit_ok;
}

int cmd_injectivity(Context& ctx, json& summary) {
  auto rep = injectivity_report(ctx.scheme(), ctx.weight(), ctx.decoration(),
                                ctx.cfg().spectral.dual_search_radius);
  json j = {{"min_abs_rho", rep.min_abs_rho},
            {"argmin", to_json(rep.argmin)},
            {"dual_points", rep.dual_points},
            {"period_found", rep.period.periodic},
            {"period_degenerate", rep.period.degenerate},
            {"period_witness", rep.period.periodic ? to_json(rep.period.witness) : json(nullptr)},
            {"verdict", rep.verdict},
            {"message", rep.message}};
  ctx.write_json("injectivity.json", j);
  summary["injectivity"] = j;
  return exit_ok;
}

json comparison(const std::string& name, Complex closed, Complex estimated, double box_volume,
                double tolerance) {
  double abs_err = std::abs(closed - estimated);
  double rel_err = std::abs(closed) > 0.0 ? abs_err / std::abs(closed) : abs_err;
  return {{"quantity", name},
          {"closed", to_json(closed)},
          {"estimated", to_json(estimated)},
          {"abs_err", abs_err},
          {"rel_err", rel_err},
          {"box_volume", box_volume},
          {"tolerance", tolerance},
          {"pass", rel_err <= tolerance}};
}

int cmd_compare(Context& ctx, json& summary) {
  const auto& cfg = ctx.cfg();
  const auto& scheme = ctx.scheme();
  Box largest = cfg.boxes.largest();
  WeightedComb comb = ctx.comb(largest);
  json items = json::array();

  Complex dens = density_closed(scheme, ctx.weight(), ctx.decoration());
  Complex weyl = weyl_average(comb, cfg.boxes).back();
  items.push_back(comparison("density", dens, weyl, largest.volume(), cfg.compare.density));

  auto table = autocorr_closed(scheme, ctx.weight(), ctx.decoration(),
                               cfg.spectral.displacement_range, ctx.autocorr_cut());
  AutocorrelationTable support;
  for (std::size_t i : table.top(static_cast<std::size_t>(cfg.spectral.top_autocorr)))
    support.entries.push_back(table.entries[i]);
  auto est = autocorr_estimate(comb, support, cfg.thresholds.match_tol);
  for (std::size_t i = 0; i < support.entries.size(); ++i) {
    json c = comparison("autocorrelation", support.entries[i].eta, est.entries[i].eta,
                        largest.volume(), cfg.compare.autocorr);
    c["l"] = to_json(support.entries[i].l);
    items.push_back(c);
  }

  auto peaks = diffraction_peaks(scheme, ctx.weight(), ctx.decoration(), cfg.spectral.k_range,
                                 ctx.peak_cut(), cfg.thresholds.intensity_floor);
  for (std::size_t i = 0; i < peaks.peaks.size() && static_cast<int>(i) < cfg.spectral.top_peaks;
       ++i) {
    const Peak& p = peaks.peaks[i];
    Complex fb = fourier_bohr_estimate(comb, p.k, cfg.boxes).back();
    json c = comparison("diffraction", p.intensity, std::norm(fb), largest.volume(),
                        cfg.compare.diffraction);
    c["k"] = to_json(p.k);
    c["z"] = to_json(p.z);
    items.push_back(c);
  }

  bool pass = true;
  for (const auto& it : items)
    pass = pass && it["pass"].get<bool>();
  json j = {{"pass", pass}, {"quantities", items}};
  ctx.write_json("comparison.json", j);
  summary["pass"] = pass;
  summary["quantities"] = items.size();
  return pass ? exit_ok : exit_tolerance;
}

json error_json(const Error& e) {
  json j = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  if (!e.field().empty())
    j["field"] = e.field();
  if (!e.witness().empty())
    j["witness"] = e.witness();
  return {{"error", j}};
}

bool config_error(ErrorKind k) {
  return k == ErrorKind::ParseError || k == ErrorKind::ValidationError;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate",     "generate",       "density",
                                              "autocorr",     "diffract",       "fourier-bohr",
                                              "almost-periods", "injectivity",  "compare"};
  return names;
}

int run_command(const std::string& command, const RunConfig& config, const RunOptions& options,
                std::ostream& out, std::ostream& err) {
  try {
    set_worker_count(options.workers);
    Context ctx(config, options);
    json summary = {{"command", command}};
    int code;
    if (command == "validate") code = cmd_validate(ctx, summary);
    else if (command == "generate") code = cmd_generate(ctx, summary);
    else if (command == "density") code = cmd_density(ctx, summary);
    else if (command == "autocorr") code = cmd_autocorr(ctx, summary);
    else if (command == "diffract") code = cmd_diffract(ctx, summary);
    else if (command == "fourier-bohr") code = cmd_fourier_bohr(ctx, summary);
    else if (command == "almost-periods") code = cmd_almost_periods(ctx, summary);
    else if (command == "injectivity") code = cmd_injectivity(ctx, summary);
    else if (command == "compare") code = cmd_compare(ctx, summary);
    else
      throw Error(ErrorKind::ValidationError, "unknown command '" + command + "'", "command");
    summary["files"] = ctx.files();
    summary["warnings"] = ctx.warnings();
    out << summary.dump(2) << '\n';
    return code;
  } catch (const Error& e) {
    err << error_json(e).dump(2) << '\n';
    return config_error(e.kind()) ? exit_config : exit_domain;
  } catch (const std::exception& e) {
    err << json{{"error", {{"kind", "InternalError"}, {"message", e.what()}}}}.dump(2) << '\n';
    return exit_domain;
  }
}

int run_command_file(const std::string& command, const std::string& config_path,
                     const RunOptions& options, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const Error& e) {
    err << error_json(e).dump(2) << '\n';
    return exit_config;
  }
  return run_command(command, *cfg, options, out, err);
}

}  // namespace cutproj
