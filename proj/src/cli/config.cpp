#include "minact/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "minact/errors.hpp"

namespace minact::cli {

namespace {

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

}  // namespace

json parse_config_text(const std::string& text) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("", "top level must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("", "syntax error at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must look like key.path=value");
  const std::string key = assignment.substr(0, eq), value = assignment.substr(eq + 1);
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty path component");
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) throw ConfigError(key, "cannot descend into a non-object");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  json parsed = json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? json(value) : parsed;
}

Section::Section(const json& node, std::string path) : node_(&node), path_(std::move(path)) {
  if (!node.is_object()) throw ConfigError(path_, "expected an object");
}

std::string Section::path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool Section::has(const std::string& key) const { return node_->contains(key); }

const json& Section::raw(const std::string& key) const {
  if (!has(key)) throw ConfigError(path(key), "required key missing");
  used_.insert(key);
  return node_->at(key);
}

double Section::number(const std::string& key) const {
  const json& v = raw(key);
  if (!v.is_number()) throw ConfigError(path(key), "expected a number");
  return v.get<double>();
}

double Section::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

double Section::positive(const std::string& key, double fallback) const {
  const double v = number(key, fallback);
  if (!(v > 0.0)) throw ConfigError(path(key), "must be > 0");
  return v;
}

int Section::integer(const std::string& key, int fallback, int min_value) const {
  int v = fallback;
  if (has(key)) {
    const json& j = raw(key);
    if (!j.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    v = j.get<int>();
  }
  if (v < min_value) throw ConfigError(path(key), "must be >= " + std::to_string(min_value));
  return v;
}

bool Section::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = raw(key);
  if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
  return v.get<bool>();
}

std::string Section::text(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const json& v = raw(key);
  if (!v.is_string()) throw ConfigError(path(key), "expected a string");
  return v.get<std::string>();
}

Vec Section::vector(const std::string& key) const {
  const json& v = raw(key);
  if (!v.is_array() || v.empty()) throw ConfigError(path(key), "expected a non-empty array of numbers");
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(path(key), "expected a non-empty array of numbers");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

Vec Section::vector(const std::string& key, const Vec& fallback) const { return has(key) ? vector(key) : fallback; }

Section Section::child(const std::string& key) const { return Section(raw(key), path(key)); }

void Section::finish() const {
  for (const auto& item : node_->items())
    if (!used_.count(item.key())) throw ConfigError(path(item.key()), "unknown key");
}

DensityPtr parse_density(const Section& s) {
  const std::string kind = s.text("kind", "");
  DensityPtr out;
  if (kind == "gaussian") {
    out = std::make_shared<StandardGaussian>();
  } else if (kind == "constant") {
    out = std::make_shared<ConstantDensity>(s.positive("value", 1.0));
  } else if (kind == "ring") {
    const double z_min = s.number("z_min", 0.0), z_max = s.number("z_max", 2.0 * M_PI);
    if (!(z_min < z_max)) throw ConfigError(s.path("z_max"), "must exceed z_min");
    out = ring_mixture(s.positive("sigma", ring_defaults::sigma), z_min, z_max,
                       s.integer("n_z", ring_defaults::n_z, 1), s.positive("c_rho", ring_defaults::c_rho));
  } else if (kind == "mixture") {
    const json& comps = s.raw("components");
    if (!comps.is_array() || comps.empty()) throw ConfigError(s.path("components"), "expected a non-empty array");
    std::vector<GaussianMixture::Component> list;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const Section c(comps[i], s.path("components") + "[" + std::to_string(i) + "]");
      list.push_back({c.positive("weight", 1.0), c.vector("mean"), c.positive("sigma", 1.0)});
      c.finish();
    }
    out = std::make_shared<GaussianMixture>(std::move(list));
  } else {
    throw ConfigError(s.path("kind"), "expected one of gaussian, constant, ring, mixture");
  }
  if (s.has("scale")) out = std::make_shared<ScaledDensity>(out, s.positive("scale", 1.0));
  s.finish();
  return out;
}

PairwiseConfig parse_pairwise_config(const Section& s) {
  PairwiseConfig c;
  c.alpha = s.number("alpha", c.alpha);
  if (!(c.alpha >= 0.0)) throw ConfigError(s.path("alpha"), "must be >= 0");
  c.lambda = s.positive("lambda", c.lambda);
  c.eta = s.positive("eta", c.eta);
  c.n_cheb = s.integer("n_cheb", c.n_cheb, 2);
  c.quadrature_order = s.integer("quadrature_order", c.quadrature_order, 1);
  c.max_iters = s.integer("max_iters", c.max_iters, 0);
  c.grad_tol = s.positive("grad_tol", c.grad_tol);
  c.backtracking = s.boolean("backtracking", c.backtracking);
  s.finish();
  return c;
}

namespace {

std::optional<double> lambda_entry(const Section& s, const std::string& key) {
  if (!s.has(key)) return std::nullopt;
  const json& v = s.raw(key);
  if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
  if (!v.is_number()) throw ConfigError(s.path(key), "expected a number or \"auto\"");
  if (!(v.get<double>() > 0.0)) throw ConfigError(s.path(key), "must be > 0");
  return v.get<double>();
}

}  // namespace

TransportConfig parse_transport_config(const Section& s, std::uint64_t seed) {
  TransportConfig c;
  c.alpha = s.number("alpha", c.alpha);
  if (!(c.alpha >= 0.0)) throw ConfigError(s.path("alpha"), "must be >= 0");
  c.eta = s.positive("eta", c.eta);
  c.max_iters = s.integer("max_iters", c.max_iters, 0);
  c.grad_tol = s.positive("grad_tol", c.grad_tol);
  c.lambda0 = lambda_entry(s, "lambda0");
  c.lambda1 = lambda_entry(s, "lambda1");
  c.sigma_star = s.positive("sigma_star", c.sigma_star);
  c.fallback_lambda = s.positive("fallback_lambda", c.fallback_lambda);
  c.n_cheb = s.integer("n_cheb", c.n_cheb, 2);
  c.quadrature_order = s.integer("quadrature_order", c.quadrature_order, 1);
  if (s.has("bandwidth")) {
    const json& v = s.raw("bandwidth");
    if (v.is_string() && v.get<std::string>() == "median") {
      c.kernel.bandwidth = 0.0;
    } else if (v.is_number() && v.get<double>() > 0.0) {
      c.kernel.bandwidth = v.get<double>();
    } else {
      throw ConfigError(s.path("bandwidth"), "expected a positive number or \"median\"");
    }
  }
  c.svd_tol = s.number("svd_tol", c.svd_tol);
  if (!(c.svd_tol >= 0.0)) throw ConfigError(s.path("svd_tol"), "must be >= 0");
  c.refit_every = s.integer("refit_every", c.refit_every, 0);
  c.trace_every = s.integer("trace_every", c.trace_every, 0);
  c.backtracking = s.boolean("backtracking", c.backtracking);
  c.rel_tol = s.number("rel_tol", c.rel_tol);
  if (!(c.rel_tol >= 0.0)) throw ConfigError(s.path("rel_tol"), "must be >= 0");
  c.rel_window = s.integer("rel_window", c.rel_window, 1);
  c.seed = seed;
  s.finish();
  return c;
}

ShootingOptions parse_shooting(const Section& s) {
  ShootingOptions o;
  o.eps = s.positive("eps", o.eps);
  o.max_evaluations = s.integer("max_evaluations", o.max_evaluations, 1);
  o.ivp.rtol = s.positive("rtol", o.ivp.rtol);
  o.ivp.atol = s.positive("atol", o.ivp.atol);
  o.n_samples = s.integer("n_samples", o.n_samples, 2);
  s.finish();
  return o;
}

std::shared_ptr<MetricField> parse_metric(const Section& s, const DensityPtr& density, double alpha) {
  const std::string kind = s.text("kind", "");
  std::shared_ptr<MetricField> out;
  try {
    if (kind == "isotropic-density") {
      if (!density) throw ConfigError(s.path("kind"), "isotropic-density needs a density block");
      out = std::make_shared<IsotropicDensityMetric>(density, s.number("alpha", alpha), s.integer("dim", 2, 1));
    } else if (kind == "constant") {
      const json& g = s.raw("G");
      if (!g.is_array() || g.empty()) throw ConfigError(s.path("G"), "expected a square array of rows");
      const auto d = static_cast<Eigen::Index>(g.size());
      Mat G(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        if (!g[i].is_array() || static_cast<Eigen::Index>(g[i].size()) != d)
          throw ConfigError(s.path("G"), "expected a square array of rows");
        for (Eigen::Index j = 0; j < d; ++j) {
          if (!g[i][j].is_number()) throw ConfigError(s.path("G"), "entries must be numbers");
          G(i, j) = g[i][j].get<double>();
        }
      }
      out = std::make_shared<ConstantMetric>(G);
    } else if (kind == "diagonal") {
      const double base = s.positive("base", 1.0), quad = s.number("quad", 1.0);
      if (!(quad >= 0.0)) throw ConfigError(s.path("quad"), "must be >= 0");
      out = quadratic_diagonal(s.integer("dim", 2, 1), base, quad);
    } else {
      throw ConfigError(s.path("kind"), "expected one of isotropic-density, constant, diagonal");
    }
  } catch (const InvalidMetric& e) {
    throw ConfigError(s.path("G"), e.what());
  }
  s.finish();
  return out;
}

std::vector<EndpointPair> parse_pairs(const Section& s, const std::string& key) {
  const json& v = s.raw(key);
  if (!v.is_array() || v.empty()) throw ConfigError(s.path(key), "expected a non-empty array of pairs");
  std::vector<EndpointPair> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Section p(v[i], s.path(key) + "[" + std::to_string(i) + "]");
    EndpointPair e{p.vector("x0"), p.vector("x1")};
    if (e.x0.size() != e.x1.size()) throw ConfigError(p.path("x1"), "dimension differs from x0");
    p.finish();
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace minact::cli
