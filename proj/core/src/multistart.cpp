#include <algorithm>
#include <cmath>
#include <numeric>

#include "fraclat/nehari.hpp"
#include "fraclat/random.hpp"
#include "parallel.hpp"

namespace fraclat {

namespace {

std::vector<double> random_center(const LatticeGeometry& geom, PortableRng& rng, double spread) {
  std::vector<double> c(static_cast<std::size_t>(geom.dim()));
  for (auto& v : c) v = static_cast<double>(rng.integer(-static_cast<int>(spread), static_cast<int>(spread)));
  return c;
}

}  // namespace

Field gaussian_bump(const LatticeGeometry& geom, std::span<const double> center, double width) {
  if (static_cast<int>(center.size()) != geom.dim()) throw std::invalid_argument("bump centre has wrong dimension");
  if (!(width > 0.0)) throw std::domain_error("bump width must be positive");
  Field out(geom);
  Site x(static_cast<std::size_t>(geom.dim()));
  const double n = geom.side();
  for (std::size_t i = 0; i < geom.site_count(); ++i) {
    geom.site(i, x);
    double r2 = 0.0;
    for (int k = 0; k < geom.dim(); ++k) {
      double dx = std::abs(x[k] - center[k]);
      if (geom.periodic()) {
        dx = std::fmod(dx, n);
        dx = std::min(dx, n - dx);
      }
      r2 += dx * dx;
    }
    out[i] = std::exp(-r2 / (width * width));
  }
  const double nrm = norm(out, 2.0);
  if (nrm == 0.0) throw std::domain_error("bump vanishes on the box");
  out *= 1.0 / nrm;
  return out;
}

InitialGuess initial_guess(const LatticeGeometry& geom, std::uint64_t seed, std::size_t index) {
  PortableRng rng(seed, index);
  const int d = geom.dim();
  const int L = geom.radius();
  const double spread = geom.periodic() ? L : std::max(1, L / 2);
  const double width = rng.uniform(1.0, 3.0);
  const auto kind = static_cast<SeedKind>(index % 4);

  InitialGuess g{Field(geom), kind, std::nullopt};
  switch (kind) {
    case SeedKind::SingleBump: {
      auto c = random_center(geom, rng, spread);
      g.w = gaussian_bump(geom, c, width);
      break;
    }
    case SeedKind::TwoBump: {
      auto c1 = random_center(geom, rng, spread);
      auto c2 = random_center(geom, rng, spread);
      const double sep = std::max(2.0, L / 4.0);
      c2[0] = c1[0] + (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(sep, std::max(sep, L * 0.75));
      if (!geom.periodic()) c2[0] = std::clamp(c2[0], -spread, spread);
      const double ratio = rng.uniform(0.5, 1.0);
      g.w = gaussian_bump(geom, c1, width);
      g.w.axpy(ratio, gaussian_bump(geom, c2, width));
      break;
    }
    case SeedKind::OddPair:
    case SeedKind::EvenPair: {
      const int parity = kind == SeedKind::OddPair ? -1 : 1;
      Site r(static_cast<std::size_t>(d), 0);
      // Bond-centred reflections only map the box onto itself on the torus.
      if (geom.periodic() && rng.uniform() < 0.5) r[0] = 1;
      std::vector<double> c(static_cast<std::size_t>(d), 0.0);
      std::vector<double> mirror(static_cast<std::size_t>(d), 0.0);
      const double half = rng.uniform(1.0, std::max(1.0, spread * 0.5));
      for (int k = 0; k < d; ++k) {
        c[k] = 0.5 * r[k] + (k == 0 ? half : 0.0);
        mirror[k] = r[k] - c[k];
      }
      g.w = gaussian_bump(geom, c, width);
      g.w.axpy(static_cast<double>(parity), gaussian_bump(geom, mirror, width));
      g.symmetry = Reflection{r, parity};
      g.w = symmetrize(g.w, *g.symmetry);
      break;
    }
  }
  return g;
}

double SolutionSet::ground_energy() const {
  if (orbits.empty()) throw std::runtime_error("solution set is empty");
  return orbits.front().energy;
}

SolutionSet multistart(const Model& m, const MultistartConfig& ms, const SolverConfig& cfg) {
  if (ms.n_starts < 1) throw std::invalid_argument("multistart needs n_starts >= 1");
  if (!(ms.dedupe_tol > 0.0)) throw std::invalid_argument("dedupe tolerance must be positive");
  cfg.validate();
  const auto n = static_cast<std::size_t>(ms.n_starts);

  struct Outcome {
    StartReport report;
    std::optional<Field> u;
  };
  std::vector<Outcome> out(n);

  detail::parallel_for(
      n,
      [&](std::size_t i) {
        InitialGuess guess = initial_guess(m.geometry(), ms.seed, i);
        SolverConfig run = cfg;
        run.seed = ms.seed;
        run.symmetry = guess.symmetry;
        Outcome o;
        o.report.index = i;
        o.report.kind = guess.kind;
        try {
          GroundStateResult r = minimize(m, guess.w, run);
          o.report.converged = true;
          o.report.energy = r.energy;
          o.report.iterations = r.iterations;
          o.u = std::move(r.u);
        } catch (const NonConvergenceError& e) {
          o.report.energy = e.best().energy;
          o.report.iterations = e.best().iterations;
          o.report.message = e.what();
        } catch (const std::exception& e) {
          o.report.message = e.what();
        }
        out[i] = std::move(o);
      },
      ms.threads);

  SolutionSet set;
  set.dedupe_tol = ms.dedupe_tol;
  for (auto& o : out) {
    if (o.u) {
      std::size_t found = set.orbits.size();
      for (std::size_t k = 0; k < set.orbits.size(); ++k) {
        if (orbit_distance(m, set.orbits[k].representative, *o.u, true).distance <= ms.dedupe_tol) {
          found = k;
          break;
        }
      }
      if (found == set.orbits.size()) set.orbits.push_back({*o.u, o.report.energy, 0, o.report.index});
      ++set.orbits[found].multiplicity;
      o.report.orbit = found;
      set.solutions.push_back(*o.u);
      set.solution_energies.push_back(o.report.energy);
    }
    set.starts.push_back(std::move(o.report));
  }

  std::vector<std::size_t> order(set.orbits.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return set.orbits[a].energy < set.orbits[b].energy; });
  std::vector<std::size_t> rank(order.size());
  std::vector<OrbitClass> sorted;
  for (std::size_t k = 0; k < order.size(); ++k) {
    rank[order[k]] = k;
    sorted.push_back(std::move(set.orbits[order[k]]));
  }
  set.orbits = std::move(sorted);
  for (auto& s : set.starts)
    if (s.converged) s.orbit = rank[s.orbit];
  return set;
}

}  // namespace fraclat
