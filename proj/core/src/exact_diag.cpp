#include "dicke/exact_diag.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>

#include "dicke/errors.hpp"
#include "dicke/meanfield.hpp"

namespace dicke {
namespace {

constexpr std::size_t kDefaultMaxDimension = 20000;

void validate_config(const EDConfig& cfg) {
  validate_params(cfg.params);
  if (cfg.n_atoms < 1) throw DomainError("ED needs at least one atom");
  if (cfg.n_max < 0) throw DomainError("Fock cutoff must be non-negative");
}

// ln of the number of spin-j multiplets among N spins 1/2.
double log_multiplicity(int n_atoms, int two_j) {
  const int k = (n_atoms - two_j) / 2;
  const double n = n_atoms;
  const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return log_binom + std::log((n - 2.0 * k + 1.0) / (n - k + 1.0));
}

struct SectorSpectrum {
  double log_multiplicity = 0.0;
  Eigen::VectorXd energies;
  Eigen::VectorXd photons;   // <n> per eigenstate
  Eigen::VectorXd spin_z;    // <m> per eigenstate
};

SectorSpectrum diagonalize(const EDConfig& cfg, int two_j, bool with_vectors) {
  const Eigen::MatrixXd h = build_hamiltonian(cfg, two_j);
  SectorSpectrum out;
  out.log_multiplicity = log_multiplicity(cfg.n_atoms, two_j);
  if (!with_vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    out.energies = solver.eigenvalues();
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  out.energies = solver.eigenvalues();

  const int spin_states = two_j + 1;
  const Eigen::Index dim = h.rows();
  Eigen::VectorXd n_diag(dim);
  Eigen::VectorXd m_diag(dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    n_diag[a] = static_cast<double>(a / spin_states);
    m_diag[a] = static_cast<double>(a % spin_states) - 0.5 * two_j;
  }
  const Eigen::MatrixXd weights = solver.eigenvectors().array().square().matrix();
  out.photons = weights.transpose() * n_diag;
  out.spin_z = weights.transpose() * m_diag;
  return out;
}

struct Thermal {
  double free_energy_per_atom = 0.0;
  double photon_density = 0.0;
  double inversion = 0.0;
  Eigen::VectorXd symmetric_energies;
};

Thermal thermal(const EDConfig& cfg, bool with_vectors) {
  const int n = cfg.n_atoms;
  Thermal out;

  if (cfg.beta.is_infinite()) {
    const SectorSpectrum s = diagonalize(cfg, n, with_vectors);
    const double e0 = s.energies[0];
    out.free_energy_per_atom = e0 / n;
    out.symmetric_energies = s.energies;
    if (with_vectors) {
      const double tol = 1e-12 * std::max(1.0, std::abs(e0));
      double photons = 0.0;
      double spin = 0.0;
      int count = 0;
      for (Eigen::Index i = 0; i < s.energies.size() && s.energies[i] - e0 <= tol; ++i) {
        photons += s.photons[i];
        spin += s.spin_z[i];
        ++count;
      }
      out.photon_density = photons / count / n;
      out.inversion = spin / count / n;
    }
    return out;
  }

  std::vector<SectorSpectrum> sectors;
  for (int two_j = n; two_j >= 0; two_j -= 2) sectors.push_back(diagonalize(cfg, two_j, with_vectors));
  out.symmetric_energies = sectors.front().energies;

  const double beta = cfg.beta.value();
  double e0 = std::numeric_limits<double>::infinity();
  for (const auto& s : sectors) e0 = std::min(e0, s.energies.minCoeff());
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& s : sectors) shift = std::max(shift, s.log_multiplicity);

  double z = 0.0;
  double photons = 0.0;
  double spin = 0.0;
  for (const auto& s : sectors) {
    for (Eigen::Index i = 0; i < s.energies.size(); ++i) {
      const double w = std::exp(s.log_multiplicity - shift - beta * (s.energies[i] - e0));
      z += w;
      if (with_vectors) {
        photons += w * s.photons[i];
        spin += w * s.spin_z[i];
      }
    }
  }
  const double log_z = -beta * e0 + shift + std::log(z);
  out.free_energy_per_atom = -log_z / (beta * n);
  if (with_vectors) {
    out.photon_density = photons / z / n;
    out.inversion = spin / z / n;
  }
  return out;
}

}  // namespace

std::size_t max_ed_dimension() {
  if (const char* env = std::getenv("DICKE_MAX_ED_DIM")) {
    std::size_t value = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc{} && ptr == text.data() + text.size() && value > 0) return value;
  }
  return kDefaultMaxDimension;
}

std::size_t sector_dimension(int n_max, int two_j) noexcept {
  return static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(two_j + 1);
}

int default_fock_cutoff(int n_atoms, const ModelParams& p, InverseTemperature beta) {
  double b0_sq = 0.0;
  if (p.coupling_sum() > 0.0) {
    const GapSolution gap = solve_gap(p, beta);
    if (gap.phase == Phase::superradiant) b0_sq = gap.b0_sq;
  }
  return std::max(16, static_cast<int>(std::ceil(8.0 * n_atoms * b0_sq)) + 16);
}

Eigen::MatrixXd build_hamiltonian(const EDConfig& cfg, int two_j) {
  validate_config(cfg);
  if (two_j < 0) two_j = cfg.n_atoms;
  if (two_j > cfg.n_atoms || (cfg.n_atoms - two_j) % 2 != 0) {
    throw DomainError("spin sector incompatible with the atom number");
  }
  const std::size_t dim = sector_dimension(cfg.n_max, two_j);
  if (dim > max_ed_dimension()) {
    throw CapacityError("ED basis dimension " + std::to_string(dim) + " exceeds the cap of " +
                        std::to_string(max_ed_dimension()));
  }

  const ModelParams& p = cfg.params;
  const int spin_states = two_j + 1;
  const double j = 0.5 * two_j;
  const double jj = j * (j + 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_atoms));
  const auto index = [spin_states](int n, int k) -> Eigen::Index {
    return static_cast<Eigen::Index>(n) * spin_states + k;
  };

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
  for (int n = 0; n <= cfg.n_max; ++n) {
    for (int k = 0; k < spin_states; ++k) {
      const double m = k - j;
      const Eigen::Index a = index(n, k);
      h(a, a) = p.Omega * m + p.omega0 * n;
      if (n == cfg.n_max) continue;
      const double boson = std::sqrt(n + 1.0) * scale;
      // b^dagger J_-: |n, m> -> |n+1, m-1>
      if (k > 0 && p.g1 != 0.0) {
        const double v = p.g1 * boson * std::sqrt(jj - m * (m - 1.0));
        const Eigen::Index b = index(n + 1, k - 1);
        h(a, b) = v;
        h(b, a) = v;
      }
      // b^dagger J_+: |n, m> -> |n+1, m+1>
      if (k + 1 < spin_states && p.g2 != 0.0) {
        const double v = p.g2 * boson * std::sqrt(jj - m * (m + 1.0));
        const Eigen::Index b = index(n + 1, k + 1);
        h(a, b) = v;
        h(b, a) = v;
      }
    }
  }
  return h;
}

SymmetryResiduals symmetry_residuals(const EDConfig& cfg) {
  const Eigen::MatrixXd h = build_hamiltonian(cfg);
  const int spin_states = cfg.n_atoms + 1;
  const double j = 0.5 * cfg.n_atoms;
  const Eigen::Index dim = h.rows();

  Eigen::VectorXd parity(dim), nsum(dim), ndiff(dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    const auto n = a / spin_states;
    const auto k = a % spin_states;
    const double m = static_cast<double>(k) - j;
    // exp(i pi (n + m)) up to the global phase exp(i pi j).
    parity[a] = (n + k) % 2 == 0 ? 1.0 : -1.0;
    nsum[a] = static_cast<double>(n) + m;
    ndiff[a] = static_cast<double>(n) - m;
  }
  auto commutator_norm = [&](const Eigen::VectorXd& d) {
    double acc = 0.0;
    for (Eigen::Index b = 0; b < dim; ++b) {
      for (Eigen::Index a = 0; a < dim; ++a) {
        const double c = h(a, b) * (d[b] - d[a]);
        acc += c * c;
      }
    }
    return std::sqrt(acc);
  };
  return {commutator_norm(parity), commutator_norm(nsum), commutator_norm(ndiff)};
}

EDResult thermal_observables(const EDConfig& cfg, int k_gaps, bool check_truncation) {
  validate_config(cfg);
  if (k_gaps < 0) throw DomainError("number of gaps must be non-negative");

  const Thermal t = thermal(cfg, true);
  if (check_truncation) {
    EDConfig wider = cfg;
    wider.n_max += 8;
    const Thermal w = thermal(wider, false);
    const double moved = std::abs(w.free_energy_per_atom - t.free_energy_per_atom);
    if (!(moved < 1e-8)) {
      throw TruncationError("free energy per atom moved by " + std::to_string(moved) +
                            " when the Fock cutoff was raised; increase n_max");
    }
  }

  EDResult out;
  out.free_energy_per_atom = t.free_energy_per_atom;
  out.photon_density = t.photon_density;
  out.inversion = t.inversion;
  const auto& e = t.symmetric_energies;
  for (Eigen::Index i = 1; i <= k_gaps && i < e.size(); ++i) out.gaps.push_back(e[i] - e[0]);

  const SymmetryResiduals r = symmetry_residuals(cfg);
  out.parity_residual = r.parity;
  out.nsum_residual = r.nsum;
  out.ndiff_residual = r.ndiff;
  return out;
}

}  // namespace dicke
