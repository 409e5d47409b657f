#pragma once

// Offline optimum (OFA) over quantized storage levels, a brute-force
// verifier for tiny instances, and the per-instance empirical ratio.

#include <string>
#include <vector>

#include "storeoffer/market.hpp"

namespace storeoffer {

class DiscretizationConfig {
public:
    /// Energy quantum `eta`; C / eta must be an integer (to 1e-9 relative).
    static DiscretizationConfig from_eta(double capacity, double eta);
    /// C_d equal steps across the capacity.
    static DiscretizationConfig from_levels(double capacity, int levels);
    /// Default quantum C / 400.
    static DiscretizationConfig standard(double capacity) { return from_levels(capacity, 400); }

    double eta() const { return eta_; }
    int levels() const { return levels_; }  // C_d
    double capacity() const { return eta_ * levels_; }

private:
    DiscretizationConfig(double eta, int levels) : eta_(eta), levels_(levels) {}
    double eta_;
    int levels_;
};

struct OptResult {
    double total_profit = 0.0;
    std::vector<double> commitments;  // x(t), one per slot
    std::vector<double> levels;       // z(1) .. z(T+1)
};

/// Backward value iteration over levels {0, eta, ..., C}. Each slot moves the
/// level to a grid point z' reachable under the rate limits and commits
/// x = u + z - z' (never over-committing). Ties go to the smallest commitment.
/// The result is a lower bound on the continuous optimum.
OptResult offline_opt_dp(const Trace& trace, const StorageSpec& spec, const DiscretizationConfig& disc);

/// Enumerates every commitment sequence with x(t) a multiple of eta in
/// [0, u(t) + min{z(t), rho_d}], stepping storage through evolve_storage.
/// Throws BudgetExceeded unless T <= 6, C_d <= 8 and every slot has at most 12 actions.
OptResult offline_opt_exhaustive(const Trace& trace, const StorageSpec& spec,
                                 const DiscretizationConfig& disc);

/// OPT / ALG for one instance, or a distinguished unbounded value when the
/// algorithm earns nothing while OPT earns something.
class CompetitiveRatio {
public:
    static CompetitiveRatio finite(double value) { return CompetitiveRatio(false, value); }
    static CompetitiveRatio unbounded() { return CompetitiveRatio(true, 0.0); }
    static CompetitiveRatio of(double opt_profit, double alg_profit);

    bool is_unbounded() const { return unbounded_; }
    /// Throws std::logic_error when unbounded.
    double value() const;
    std::string to_string() const;

    friend bool operator<(const CompetitiveRatio& a, const CompetitiveRatio& b);
    friend bool operator==(const CompetitiveRatio&, const CompetitiveRatio&) = default;

private:
    CompetitiveRatio(bool unbounded, double value) : unbounded_(unbounded), value_(value) {}
    bool unbounded_;
    double value_;
};

CompetitiveRatio empirical_cr(const Trace& trace, const StorageSpec& spec, const PenaltyParams& penalty,
                              const Strategy& strategy, const DiscretizationConfig& disc,
                              std::span<const Forecast> forecasts = {});

}  // namespace storeoffer
