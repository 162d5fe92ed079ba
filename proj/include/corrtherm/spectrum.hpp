#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace corrtherm {

// Energy levels of one subsystem in units of kT (beta * E).
struct LocalSystem {
    std::vector<double> levels;
    std::optional<double> quantum;

    std::size_t dim() const { return levels.size(); }
    void validate() const;
    double log_partition() const;
    std::vector<double> gibbs_probs() const;

    // Two levels {0, gap}; the gap doubles as lattice step when positive.
    static LocalSystem qubit(double beta_e0);
};

struct DiagonalState {
    std::vector<double> probs;

    void validate(const LocalSystem& sys) const;

    // (1 - p, p) on {ground, excited}.
    static DiagonalState qubit(double p);
    static DiagonalState thermal(const LocalSystem& sys);
};

// Sort levels ascending and permute the state to match.
std::pair<LocalSystem, DiagonalState> canonicalize(const LocalSystem& sys,
                                                   const DiagonalState& state);

struct SpectrumEntry {
    double energy;
    double log_degeneracy;
};

struct SpectrumN {
    std::vector<SpectrumEntry> entries;
    std::size_t n_copies = 0;
    double coalesce_tol = 0.0;
    std::optional<double> quantum;

    std::size_t size() const { return entries.size(); }
    double match_tol() const;
    std::optional<std::size_t> find(double energy) const;

    // Spectrum of zero copies: a single level at energy 0.
    static SpectrumN vacuum(std::optional<double> quantum = std::nullopt);
};

struct GibbsWeights {
    std::vector<double> log_weight;
    double log_z = 0.0;
};

inline constexpr std::size_t kDefaultSpectrumCap = std::size_t{1} << 22;

double default_coalesce_tol(const LocalSystem& sys, std::size_t n);

SpectrumN build_spectrum(const LocalSystem& sys, std::size_t n,
                         std::optional<double> coalesce_tol = std::nullopt,
                         std::size_t cap = kDefaultSpectrumCap);

GibbsWeights gibbs_weights(const SpectrumN& spec, const LocalSystem& sys);

// log g_{N-1}(E - E_d) looked up in the (N-1)-copy spectrum; -inf when absent.
double degeneracy_shifted(const SpectrumN& prev, double energy, double local_energy);

// Row-major D x M matrix of g_{N-1}(E - E_d) / g_N(E): the fraction of states in
// level E whose first subsystem sits in local level d.
std::vector<double> conditional_coefficients(const SpectrumN& spec, const SpectrumN& prev,
                                             const LocalSystem& sys);

// Spectrum of n - 1 copies, the vacuum when n == 1.
SpectrumN predecessor_spectrum(const LocalSystem& sys, const SpectrumN& spec,
                               std::size_t cap = kDefaultSpectrumCap);

}  // namespace corrtherm
