#include "fraclat/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace fraclat {

PeriodicTable::PeriodicTable(std::vector<int> period, std::vector<double> values)
    : period_(std::move(period)), values_(std::move(values)) {
  std::size_t n = 1;
  for (int t : period_) {
    if (t < 1) throw std::invalid_argument("periods must be >= 1");
    n *= static_cast<std::size_t>(t);
  }
  if (values_.size() != n)
    throw std::invalid_argument("periodic table needs " + std::to_string(n) + " values, got " +
                                std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw std::domain_error("periodic table values must be finite");
}

double PeriodicTable::operator()(std::span<const int> x) const {
  std::size_t idx = 0;
  for (std::size_t a = 0; a < period_.size(); ++a) {
    const int t = period_[a];
    int r = x[a] % t;
    if (r < 0) r += t;
    idx = idx * static_cast<std::size_t>(t) + static_cast<std::size_t>(r);
  }
  return values_[idx];
}

double PeriodicTable::min() const { return *std::min_element(values_.begin(), values_.end()); }
double PeriodicTable::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool PeriodicTable::commensurate_with(const LatticeGeometry& geom) const {
  return std::all_of(period_.begin(), period_.end(), [&](int t) { return geom.side() % t == 0; });
}

Potential::Potential(Kind kind, PeriodicTable table, double c1, double c2)
    : kind_(kind), table_(std::move(table)), c1_(c1), c2_(c2) {
  if (!(c1_ > 0.0)) throw std::domain_error("potential must be bounded below by a positive constant");
}

Potential Potential::constant(double c) { return Potential(Kind::Constant, PeriodicTable({}, {c}), c, c); }

Potential Potential::periodic(PeriodicTable table) {
  const double lo = table.min();
  const double hi = table.max();
  return Potential(Kind::Periodic, std::move(table), lo, hi);
}

double Potential::operator()(std::span<const int> x) const { return table_(x); }

Field Potential::sample(const LatticeGeometry& geom) const {
  Field h(geom);
  Site x(static_cast<std::size_t>(geom.dim()));
  for (std::size_t i = 0; i < geom.site_count(); ++i) {
    geom.site(i, x);
    h[i] = (*this)(x);
  }
  return h;
}

Nonlinearity::Nonlinearity(Kind kind, double p, PeriodicTable weight)
    : kind_(kind), p_(p), weight_(std::move(weight)) {
  if (!(p_ > 2.0)) throw std::domain_error("the nonlinearity exponent must satisfy p > 2");
  if (!(weight_.min() > 0.0)) throw std::domain_error("nonlinearity weight must be positive");
}

Nonlinearity Nonlinearity::pure_power(double p) { return Nonlinearity(Kind::PurePower, p, PeriodicTable({}, {1.0})); }

Nonlinearity Nonlinearity::weighted_power(double p, PeriodicTable weight) {
  return Nonlinearity(Kind::WeightedPower, p, std::move(weight));
}

double Nonlinearity::weight(std::span<const int> x) const { return weight_(x); }

Field Nonlinearity::sample_weight(const LatticeGeometry& geom) const {
  Field a(geom);
  Site x(static_cast<std::size_t>(geom.dim()));
  for (std::size_t i = 0; i < geom.site_count(); ++i) {
    geom.site(i, x);
    a[i] = weight_(x);
  }
  return a;
}

double Nonlinearity::f(double a, double u) const {
  if (u == 0.0) return 0.0;
  return a * std::pow(std::abs(u), p_ - 2.0) * u;
}

double Nonlinearity::F(double a, double u) const {
  if (u == 0.0) return 0.0;
  return a * std::pow(std::abs(u), p_) / p_;
}

double Nonlinearity::df(double a, double u) const {
  if (u == 0.0) return 0.0;
  return a * (p_ - 1.0) * std::pow(std::abs(u), p_ - 2.0);
}

double Nonlinearity::F_diff(double a, double from, double to) const {
  const double ratio_m1 = (to - from) / from;
  if (from == 0.0 || !(std::abs(ratio_m1) <= 0.5)) return F(a, to) - F(a, from);
  // |to|^p - |from|^p = |from|^p (exp(p log(to / from)) - 1).
  return a * std::pow(std::abs(from), p_) / p_ * std::expm1(p_ * std::log1p(ratio_m1));
}

namespace {

Kernel build_kernel(const LatticeGeometry& geom, FractionalOrder alpha, const SpectralConfig& spectral) {
  if (geom.periodic()) return periodic_kernel(alpha, geom);
  return kernel_table(alpha, geom.dim(), spectral.radius, spectral, false);
}

}  // namespace

Model::Model(LatticeGeometry geom, FractionalOrder alpha, Potential h, Nonlinearity nl, SpectralConfig spectral)
    : geom_(geom),
      alpha_(alpha),
      h_(std::move(h)),
      nl_(std::move(nl)),
      spectral_(spectral),
      kernel_(build_kernel(geom, alpha, spectral)),
      h_values_(geom),
      weight_values_(geom) {
  check_compatible();
  h_values_ = h_.sample(geom_);
  weight_values_ = nl_.sample_weight(geom_);
}

Model::Model(LatticeGeometry geom, FractionalOrder alpha, Potential h, Nonlinearity nl)
    : Model(geom, alpha, std::move(h), std::move(nl), default_spectral_config(geom.dim(), geom.radius())) {}

void Model::check_compatible() const {
  auto check_table = [&](const PeriodicTable* t, const char* what) {
    if (t == nullptr) return;
    if (t->dim() != geom_.dim())
      throw std::invalid_argument(std::string(what) + " period has " + std::to_string(t->dim()) +
                                  " entries, lattice dimension is " + std::to_string(geom_.dim()));
    if (geom_.periodic() && !t->commensurate_with(geom_))
      throw std::invalid_argument(std::string(what) + " period must divide the periodic box side " +
                                  std::to_string(geom_.side()));
  };
  check_table(h_.table(), "potential");
  check_table(nl_.weight_table(), "nonlinearity weight");
  if (kernel_.dim() != geom_.dim()) throw std::invalid_argument("kernel dimension does not match the lattice");
}

Field Model::apply_operator(const Field& u) const { return apply_kernel(u, kernel_); }

Field Model::apply_linear(const Field& u) const {
  Field v = apply_operator(u);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += h_values_[i] * u[i];
  return v;
}

Model Model::with_kernel(Kernel kernel) const {
  Model copy = *this;
  copy.kernel_ = std::move(kernel);
  copy.check_compatible();
  return copy;
}

double f_eval(const Model& m, std::span<const int> x, double u) {
  return m.nonlinearity().f(m.nonlinearity().weight(x), u);
}

double F_eval(const Model& m, std::span<const int> x, double u) {
  return m.nonlinearity().F(m.nonlinearity().weight(x), u);
}

double halpha_inner(const Model& m, const Field& u, const Field& v) {
  require_same_geometry(u, v);
  return dot(m.apply_linear(u), v);
}

double halpha_norm_sq(const Model& m, const Field& u) { return halpha_inner(m, u, u); }

double energy(const Model& m, const Field& u) {
  const Field Lu = m.apply_linear(u);
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) terms[i] = 0.5 * Lu[i] * u[i] - m.F_at(i, u[i]);
  return sum(terms);
}

Field gradient(const Model& m, const Field& u) {
  Field g = m.apply_linear(u);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= m.f_at(i, u[i]);
  return g;
}

double nehari_residual(const Model& m, const Field& u) {
  if (u.is_zero()) throw std::domain_error("the Nehari manifold excludes u = 0");
  const Field Lu = m.apply_linear(u);
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) terms[i] = Lu[i] * u[i] - m.f_at(i, u[i]) * u[i];
  return sum(terms);
}

double mountain_gap(const Model& m, const Field& u) {
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) terms[i] = 0.5 * m.f_at(i, u[i]) * u[i] - m.F_at(i, u[i]);
  return sum(terms);
}

Model ModelConfig::build() const {
  const LatticeGeometry geom(dim, radius, boundary);
  Potential h = h_kind == "constant" ? Potential::constant(h_constant)
                                     : Potential::periodic(PeriodicTable(h_period, h_values));
  Nonlinearity nl = f_kind == "power" ? Nonlinearity::pure_power(p)
                                      : Nonlinearity::weighted_power(p, PeriodicTable(weight_period, weight_values));
  SpectralConfig spectral = default_spectral_config(dim, radius);
  if (points > 0) spectral.points = points;
  if (kernel_radius > 0) spectral.radius = kernel_radius;
  else spectral.radius = std::max(1, std::min(4 * radius, spectral.points / 4));
  return Model(geom, FractionalOrder(alpha), std::move(h), std::move(nl), spectral);
}

ModelConfig parse_model_config(const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model config is not valid JSON: ") + e.what());
  }
  ModelConfig cfg;
  try {
    cfg.dim = j.at("d").get<int>();
    cfg.radius = j.at("L").get<int>();
    cfg.boundary = parse_boundary(j.value("boundary", std::string("zero")));
    cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("h")) {
      const auto& h = j.at("h");
      cfg.h_kind = h.value("kind", std::string("constant"));
      if (cfg.h_kind == "constant") {
        cfg.h_constant = h.at("c").get<double>();
      } else if (cfg.h_kind == "periodic") {
        cfg.h_period = h.at("period").get<std::vector<int>>();
        cfg.h_values = h.at("values").get<std::vector<double>>();
      } else {
        throw std::invalid_argument("unknown potential kind '" + cfg.h_kind + "'");
      }
    }
    if (j.contains("f")) {
      const auto& f = j.at("f");
      cfg.f_kind = f.value("kind", std::string("power"));
      cfg.p = f.at("p").get<double>();
      if (cfg.f_kind == "weighted_power") {
        const auto& w = f.at("weight");
        cfg.weight_period = w.at("period").get<std::vector<int>>();
        cfg.weight_values = w.at("values").get<std::vector<double>>();
      } else if (cfg.f_kind != "power") {
        throw std::invalid_argument("unknown nonlinearity kind '" + cfg.f_kind + "'");
      }
    }
    if (j.contains("spectral")) {
      const auto& s = j.at("spectral");
      cfg.points = s.value("M", 0);
      cfg.kernel_radius = s.value("R", 0);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed model config: ") + e.what());
  }
  return cfg;
}

std::string to_json(const ModelConfig& cfg) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["d"] = cfg.dim;
  j["L"] = cfg.radius;
  j["boundary"] = std::string(to_string(cfg.boundary));
  j["alpha"] = cfg.alpha;
  if (cfg.h_kind == "constant")
    j["h"] = {{"kind", "constant"}, {"c", cfg.h_constant}};
  else
    j["h"] = {{"kind", cfg.h_kind}, {"period", cfg.h_period}, {"values", cfg.h_values}};
  if (cfg.f_kind == "power")
    j["f"] = {{"kind", "power"}, {"p", cfg.p}};
  else
    j["f"] = {{"kind", cfg.f_kind},
              {"p", cfg.p},
              {"weight", {{"period", cfg.weight_period}, {"values", cfg.weight_values}}}};
  if (cfg.points > 0 || cfg.kernel_radius > 0) j["spectral"] = {{"M", cfg.points}, {"R", cfg.kernel_radius}};
  return j.dump(2);
}

}  // namespace fraclat
