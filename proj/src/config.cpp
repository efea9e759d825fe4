#include "cutproj/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cutproj/error.hpp"

namespace cutproj {

namespace {

using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::ValidationError, field + ": " + message, field);
}

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number())
    invalid(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v))
    invalid(path, "must be finite");
  return v;
}

std::int64_t as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    invalid(path, "expected an integer");
  return j.get<std::int64_t>();
}

Vector as_vector(const json& j, const std::string& path, std::optional<int> size = {}) {
  if (!j.is_array())
    invalid(path, "expected an array of numbers");
  if (size && static_cast<int>(j.size()) != *size)
    invalid(path, "expected " + std::to_string(*size) + " entries, got " +
                      std::to_string(j.size()));
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

// A number, or [re, im].
Complex as_complex(const json& j, const std::string& path) {
  if (j.is_number())
    return as_number(j, path);
  if (j.is_array() && j.size() == 2)
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
  invalid(path, "expected a number or [re, im]");
}

// Object view that remembers which keys were read; finish() rejects the rest.
class Obj {
public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object())
      invalid(path_.empty() ? "<root>" : path_, "expected an object");
  }

  const json* get(const std::string& key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }
  const json& need(const std::string& key) {
    const json* v = get(key);
    if (!v)
      invalid(at(key), "required field missing");
    return *v;
  }
  std::string at(const std::string& key) const { return join_path(path_, key); }

  double number(const std::string& key, double fallback) {
    const json* v = get(key);
    return v ? as_number(*v, at(key)) : fallback;
  }
  std::optional<double> optional_number(const std::string& key) {
    const json* v = get(key);
    if (!v)
      return std::nullopt;
    return as_number(*v, at(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key()))
        invalid(at(it.key()), "unknown field");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Box parse_box(const json& j, const std::string& path, int dim) {
  Obj o(j, path);
  Vector lo = as_vector(o.need("lo"), o.at("lo"), dim);
  Vector hi = as_vector(o.need("hi"), o.at("hi"), dim);
  o.finish();
  for (int i = 0; i < dim; ++i)
    if (lo[i] > hi[i])
      invalid(path, "hi < lo on axis " + std::to_string(i));
  return Box(lo, hi);
}

double positive(Obj& o, const std::string& key, double fallback) {
  double v = o.number(key, fallback);
  if (!(v > 0.0))
    invalid(o.at(key), "must be positive");
  return v;
}

WeightFunction parse_weight(const json& j, const std::string& path, std::optional<int> dim) {
  Obj o(j, path);
  const json& kind_j = o.need("kind");
  if (!kind_j.is_string())
    invalid(o.at("kind"), "expected a string");
  const std::string kind = kind_j.get<std::string>();

  int m = 0;
  if (const json* dj = o.get("dim")) {
    std::int64_t v = as_integer(*dj, o.at("dim"));
    if (v < 1 || v > 7)
      invalid(o.at("dim"), "must be between 1 and 7");
    if (dim && v != *dim)
      invalid(o.at("dim"), "does not match the internal dimension " + std::to_string(*dim));
    m = static_cast<int>(v);
  } else if (dim) {
    m = *dim;
  } else if (kind != "tensor" && kind != "sharp_window") {
    invalid(o.at("dim"), "required for tensor factors");
  }

  std::optional<WeightFunction> f;
  if (kind == "gaussian") {
    f = WeightFunction::gaussian(m, positive(o, "width", 1.0));
  } else if (kind == "bump") {
    f = WeightFunction::bump(m, positive(o, "radius", 1.0));
  } else if (kind == "polydecay") {
    double p = positive(o, "exponent", 0.0 + m + 1);
    f = WeightFunction::polydecay(m, p, positive(o, "scale", 1.0));
  } else if (kind == "sharp_window") {
    Vector lo = as_vector(o.need("lo"), o.at("lo"));
    Vector hi = as_vector(o.need("hi"), o.at("hi"), static_cast<int>(lo.size()));
    if (lo.size() == 0 || (m && lo.size() != m))
      invalid(o.at("lo"), "window dimension does not match the internal dimension");
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (lo[i] > hi[i])
        invalid(path, "window has hi < lo");
    f = WeightFunction::sharp_window(Box(lo, hi));
  } else if (kind == "tensor") {
    const json& fj = o.need("factors");
    if (!fj.is_array() || fj.empty())
      invalid(o.at("factors"), "expected a non-empty array");
    std::vector<WeightFunction> factors;
    for (std::size_t i = 0; i < fj.size(); ++i)
      factors.push_back(parse_weight(fj[i], o.at("factors") + "[" + std::to_string(i) + "]",
                                     std::nullopt));
    f = WeightFunction::tensor(std::move(factors));
    if (m && f->dim() != m)
      invalid(o.at("factors"), "factor dimensions add up to " + std::to_string(f->dim()) +
                                   ", expected " + std::to_string(m));
  } else {
    invalid(o.at("kind"), "unknown weight kind '" + kind +
                              "' (gaussian, bump, polydecay, sharp_window, tensor)");
  }

  if (const json* a = o.get("amplitude"))
    f = f->scaled(as_complex(*a, o.at("amplitude")));
  if (const json* c = o.get("center"))
    f = f->translated(as_vector(*c, o.at("center"), f->dim()));
  if (const json* dc = o.get("decay")) {
    Obj d(*dc, o.at("decay"));
    DecayCertificate cert;
    cert.C = d.number("C", 0.0);
    cert.alpha = d.number("alpha", 1.0);
    d.finish();
    if (cert.C < 0.0)
      invalid(d.at("C"), "must be non-negative");
    if (!(cert.alpha > 0.0))
      invalid(d.at("alpha"), "must be positive");
    f = f->with_decay_certificate(cert);
  }
  o.finish();
  return *f;
}

RunConfig build(const json& root) {
  RunConfig cfg;
  Obj r(root, "");

  // scheme
  {
    Obj s(r.need("scheme"), "scheme");
    std::int64_t d = as_integer(s.need("d"), s.at("d"));
    std::int64_t m = as_integer(s.need("m"), s.at("m"));
    if (d < 1)
      invalid(s.at("d"), "must be at least 1");
    if (m < 1)
      invalid(s.at("m"), "must be at least 1");
    if (d + m > max_lattice_dim)
      invalid(s.at("m"), "d + m must not exceed " + std::to_string(max_lattice_dim));
    cfg.d = static_cast<int>(d);
    cfg.m = static_cast<int>(m);
    const int n = cfg.d + cfg.m;
    const json& bj = s.need("basis");
    if (!bj.is_array() || static_cast<int>(bj.size()) != n)
      invalid(s.at("basis"), "expected " + std::to_string(n) + " rows for d + m = " +
                                 std::to_string(n));
    cfg.basis = Matrix(n, n);
    for (int i = 0; i < n; ++i) {
      Vector row = as_vector(bj[i], s.at("basis") + "[" + std::to_string(i) + "]", n);
      cfg.basis.row(i) = row.transpose();
    }
    try {
      make_basis(cfg.basis);
    } catch (const Error& e) {
      invalid(s.at("basis"), e.what());
    }
    if (const json* vj = s.get("validation")) {
      Obj v(*vj, s.at("validation"));
      if (const json* x = v.get("search_radius")) {
        cfg.validation.search_radius = as_integer(*x, v.at("search_radius"));
        if (cfg.validation.search_radius < 10)
          invalid(v.at("search_radius"), "must be at least 10");
      }
      cfg.validation.coverage_eps = positive(v, "coverage_eps", cfg.validation.coverage_eps);
      if (const json* x = v.get("assume_dense")) {
        if (!x->is_boolean())
          invalid(v.at("assume_dense"), "expected true or false");
        cfg.validation.assume_dense = x->get<bool>();
      }
      v.finish();
    }
    s.finish();
  }

  // weight
  if (const json* wj = r.get("weight"))
    cfg.weight = parse_weight(*wj, "weight", cfg.m);
  else
    cfg.weight = WeightFunction::gaussian(cfg.m);

  // decoration
  if (const json* dj = r.get("decoration")) {
    if (!dj->is_array() || dj->empty())
      invalid("decoration", "expected a non-empty array of atoms");
    for (std::size_t i = 0; i < dj->size(); ++i) {
      std::string p = "decoration[" + std::to_string(i) + "]";
      Obj a((*dj)[i], p);
      DecorationAtom atom;
      const json* sj = a.get("s");
      const json* kj = a.get("k");
      atom.s = sj ? as_vector(*sj, a.at("s"), cfg.d) : Vector::Zero(cfg.d);
      atom.k = kj ? as_vector(*kj, a.at("k"), cfg.m) : Vector::Zero(cfg.m);
      const json* w = a.get("w");
      atom.w = w ? as_complex(*w, a.at("w")) : Complex(1.0);
      a.finish();
      cfg.decoration.push_back(atom);
    }
  } else {
    cfg.decoration.push_back({Vector::Zero(cfg.d), Vector::Zero(cfg.m), 1.0});
  }

  // boxes
  {
    cfg.boxes.base = Box(Vector::Zero(cfg.d), Vector::Constant(cfg.d, 100.0));
    cfg.boxes.growth = 10.0;
    cfg.boxes.steps = 3;
    if (const json* bj = r.get("boxes")) {
      Obj b(*bj, "boxes");
      if (const json* base = b.get("base"))
        cfg.boxes.base = parse_box(*base, b.at("base"), cfg.d);
      if (!(cfg.boxes.base.volume() > 0.0))
        invalid(b.at("base"), "must have positive volume");
      cfg.boxes.growth = b.number("growth", cfg.boxes.growth);
      if (!(cfg.boxes.growth > 1.0))
        invalid(b.at("growth"), "must be greater than 1");
      if (const json* st = b.get("steps")) {
        std::int64_t steps = as_integer(*st, b.at("steps"));
        if (steps < 1 || steps > 64)
          invalid(b.at("steps"), "must be between 1 and 64");
        cfg.boxes.steps = static_cast<int>(steps);
      }
      b.finish();
    }
  }

  // thresholds
  if (const json* tj = r.get("thresholds")) {
    Obj t(*tj, "thresholds");
    Thresholds& th = cfg.thresholds;
    th.eps_trunc = positive(t, "eps_trunc", th.eps_trunc);
    th.intensity_floor = positive(t, "intensity_floor", th.intensity_floor);
    th.internal_cut = t.optional_number("internal_cut");
    if (th.internal_cut && !(*th.internal_cut > 0.0))
      invalid(t.at("internal_cut"), "must be positive");
    th.autocorr_cut = t.optional_number("autocorr_cut");
    if (th.autocorr_cut && !(*th.autocorr_cut > 0.0))
      invalid(t.at("autocorr_cut"), "must be positive");
    th.match_tol = positive(t, "match_tol", th.match_tol);
    th.almost_period_eps = positive(t, "almost_period_eps", th.almost_period_eps);
    t.finish();
  }

  // spectral
  {
    SpectralParams& sp = cfg.spectral;
    sp.k_range = Box::cube(cfg.d, 5.0);
    sp.displacement_range = Box::cube(cfg.d, 20.0);
    sp.almost_period_box = Box(Vector::Zero(cfg.d), Vector::Constant(cfg.d, 500.0));
    if (const json* sj = r.get("spectral")) {
      Obj s(*sj, "spectral");
      if (const json* x = s.get("k_range"))
        sp.k_range = parse_box(*x, s.at("k_range"), cfg.d);
      if (const json* x = s.get("displacement_range"))
        sp.displacement_range = parse_box(*x, s.at("displacement_range"), cfg.d);
      if (const json* x = s.get("xi")) {
        Obj xo(*x, s.at("xi"));
        const json* xs = xo.get("s");
        const json* xk = xo.get("k");
        sp.xi_s = xs ? as_vector(*xs, xo.at("s"), cfg.d) : Vector::Zero(cfg.d);
        sp.xi_k = xk ? as_vector(*xk, xo.at("k"), cfg.m) : Vector::Zero(cfg.m);
        xo.finish();
      }
      if (const json* x = s.get("fourier_bohr_k")) {
        if (!x->is_array())
          invalid(s.at("fourier_bohr_k"), "expected an array of frequencies");
        for (std::size_t i = 0; i < x->size(); ++i)
          sp.fourier_bohr_k.push_back(as_vector(
              (*x)[i], s.at("fourier_bohr_k") + "[" + std::to_string(i) + "]", cfg.d));
      }
      sp.kernel_scale = positive(s, "kernel_scale", sp.kernel_scale);
      if (const json* x = s.get("almost_period_box"))
        sp.almost_period_box = parse_box(*x, s.at("almost_period_box"), cfg.d);
      if (const json* x = s.get("dual_search_radius")) {
        sp.dual_search_radius = as_integer(*x, s.at("dual_search_radius"));
        if (sp.dual_search_radius < 0)
          invalid(s.at("dual_search_radius"), "must be non-negative");
      }
      for (auto [key, target] : {std::pair{"top_autocorr", &sp.top_autocorr},
                                 std::pair{"top_peaks", &sp.top_peaks}}) {
        if (const json* x = s.get(key)) {
          std::int64_t v = as_integer(*x, s.at(key));
          if (v < 1 || v > 100000)
            invalid(s.at(key), "must be between 1 and 100000");
          *target = static_cast<int>(v);
        }
      }
      s.finish();
    }
  }

  // compare
  if (const json* cj = r.get("compare")) {
    Obj c(*cj, "compare");
    cfg.compare.density = positive(c, "density_rel", cfg.compare.density);
    cfg.compare.autocorr = positive(c, "autocorr_rel", cfg.compare.autocorr);
    cfg.compare.diffraction = positive(c, "diffraction_rel", cfg.compare.diffraction);
    c.finish();
  }

  // output
  if (const json* oj = r.get("output")) {
    Obj o(*oj, "output");
    if (const json* dir = o.get("directory")) {
      if (!dir->is_string() || dir->get<std::string>().empty())
        invalid(o.at("directory"), "expected a non-empty string");
      cfg.output.directory = dir->get<std::string>();
    }
    if (const json* fm = o.get("formats")) {
      if (!fm->is_array())
        invalid(o.at("formats"), "expected an array");
      cfg.output.csv = cfg.output.json = false;
      for (const auto& x : *fm) {
        std::string v = x.is_string() ? x.get<std::string>() : "";
        if (v == "csv")
          cfg.output.csv = true;
        else if (v == "json")
          cfg.output.json = true;
        else
          invalid(o.at("formats"), "entries must be \"csv\" or \"json\"");
      }
    }
    o.finish();
  }

  r.finish();
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError, source + ":" + std::to_string(line) + ":" +
                                           std::to_string(col) + ": malformed JSON (" +
                                           e.what() + ")");
  }
  try {
    return build(root);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ValidationError)
      throw;
    // Construction errors from the library surface as validation errors.
    throw Error(ErrorKind::ValidationError, e.what(), e.field());
  }
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorKind::IoError, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace cutproj
