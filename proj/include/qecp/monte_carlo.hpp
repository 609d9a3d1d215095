// Monte Carlo runner for the unknown-parameter protocol.  Trials are sampled
// in fixed-size chunks, each with an independent stream derived from
// (seed, chunk index); chunks are merged in index order, so results are
// bit-identical for a fixed seed regardless of the worker count.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qecp/homodyne.hpp"
#include "qecp/optics.hpp"
#include "qecp/protocol.hpp"
#include "qecp/rng.hpp"

namespace qecp {

struct DetectionModel {
    HomodyneModel probe1;      // theta
    HomodyneModel probe2;      // theta' (the probes may differ)
    bool ideal = false;        // infinite-amplitude limit: no misreads

    static DetectionModel ideal_detection() {
        DetectionModel d;
        d.ideal = true;
        return d;
    }
};

struct TrialResult {
    ProbePhasePair branch;
    FourierOutcome outcome;
    bool homodyne_misread = false;
    OutcomeClass final_class;
    double fidelity = 0.0;  // corrected state vs its class's canonical form
    PureState final_state;
};

// Precomputed sampling tables: branch distribution plus the 81-outcome
// feed-forward table of every nonempty branch.
//
// With a Fourier-network imperfection supplied, the measurement projects
// onto the ports of the imperfect composed network while the corrections
// stay the ideal lookup table (feed-forward is classical logic fixed in
// advance); per-trial fidelity is then measured against the intended ideal
// output, and states that drift outside the canonical families classify as
// UNCLASSIFIABLE in the summaries.
class ProtocolSampler {
public:
    explicit ProtocolSampler(const SchmidtTriple& coeffs,
                             std::optional<ImperfectionParams> fourier_imp = std::nullopt) {
        std::optional<PortVectors> real_ports;
        if (fourier_imp) {
            // The nominal network already differs from U_F by a fixed row
            // permutation; the detector labels are calibrated against it, so
            // logical outcome kappa reads the physical row the ideal fit
            // assigns to row kappa of U_F.  Residual per-outcome phases are
            // global and drop out of every fidelity.
            const Matrix net = compose_fourier(*fourier_imp).first;
            const EquivalenceReport nominal = compose_fourier().second;
            std::array<int, 3> physical_row{};
            for (int i = 0; i < 3; ++i) physical_row[nominal.permutation[i]] = i;
            PortVectors pv;
            for (int kappa = 0; kappa < 3; ++kappa) {
                const int i = physical_row[static_cast<size_t>(kappa)];
                pv[static_cast<size_t>(kappa)].resize(3);
                for (int j = 0; j < 3; ++j)
                    pv[static_cast<size_t>(kappa)][static_cast<size_t>(j)] = std::conj(net(i, j));
            }
            real_ports = std::move(pv);
        }
        const auto branches = enumerate_branches(coeffs);
        for (const auto& [pair, info] : branches) {
            pairs_.push_back(pair);
            probs_.push_back(info.prob);
            BranchTable table;
            table.entries = derive_feedforward(pair);
            table.cond.reserve(table.entries.size());
            if (real_ports) {
                const PureState branch_state = ledger_branch_state(pair);
                for (auto& e : table.entries) {
                    auto [residual, cond] = measure_ports(branch_state, e.outcome, *real_ports);
                    const PureState intended = e.corrected;
                    e.cond_prob = cond;
                    e.corrected = apply_unitary(residual.normalized(), "a", e.correction);
                    e.final_class = classify_output(e.corrected);
                    table.cond.push_back(cond);
                    table.fid.push_back(fidelity(e.corrected, intended));
                }
            } else {
                for (const auto& e : table.entries) {
                    table.cond.push_back(e.cond_prob);
                    table.fid.push_back(fidelity(e.corrected, canonical_state(e.final_class)));
                }
            }
            tables_.push_back(std::move(table));
        }
    }

    // Draw order per trial: branch, then (unless ideal) the two probe
    // x-values, then the Fourier outcome.
    TrialResult sample(const DetectionModel& det, Rng& rng) const {
        TrialResult t;
        const size_t bi = rng.categorical(probs_);
        t.branch = pairs_[bi];
        if (!det.ideal) {
            t.homodyne_misread = probe_misread(det.probe1, rng) || probe_misread(det.probe2, rng);
        }
        const BranchTable& table = tables_[bi];
        const size_t oi = rng.categorical(table.cond);
        const FeedForwardEntry& e = table.entries[oi];
        t.outcome = e.outcome;
        t.final_class = e.final_class;
        t.fidelity = table.fid[oi];
        t.final_state = e.corrected;
        return t;
    }

    const std::vector<ProbePhasePair>& pairs() const { return pairs_; }
    const std::vector<double>& probs() const { return probs_; }

    const FeedForwardEntry& entry(size_t branch_idx, int outcome_idx) const {
        return tables_[branch_idx].entries[outcome_idx];
    }

private:
    struct BranchTable {
        std::vector<FeedForwardEntry> entries;
        std::vector<double> cond;
        std::vector<double> fid;
    };

    // One probe's detector confusion.  The displacement step of the
    // measurement recenters every branch onto the same phase-adjacent pair,
    // so the confusion is modeled as discriminating multipliers {0, 1}: an
    // x-value is drawn from the k=0 distribution and misread when it falls
    // past the midpoint toward k=1.
    static bool probe_misread(const HomodyneModel& m, Rng& rng) {
        const GaussianOutcome g = x_distribution(m, 0);
        const double x = rng.normal(g.mean, std::sqrt(g.variance));
        return discriminate(m, x, {0, 1}) != 0;
    }

    std::vector<ProbePhasePair> pairs_;
    std::vector<double> probs_;
    std::vector<BranchTable> tables_;
};

// Single-shot convenience; builds the sampling tables each call.
inline TrialResult run_trial(const SchmidtTriple& coeffs, const DetectionModel& det, Rng& rng) {
    return ProtocolSampler(coeffs).sample(det, rng);
}

struct McSummary {
    long long trials = 0;
    std::map<std::string, long long> class_counts;
    long long misreads = 0;
    double mean_fidelity = 0.0;

    double misread_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(misreads) / trials;
    }
};

struct McResult {
    std::vector<TrialResult> trials;
    McSummary summary;
};

inline constexpr long long kMcChunkSize = 1024;

// threads <= 0 picks the hardware concurrency.  Output is a pure function of
// (coeffs, det, trials, seed, fourier_imp).
inline McResult run_monte_carlo(const SchmidtTriple& coeffs, const DetectionModel& det,
                                long long trials, std::uint64_t seed, int threads = 0,
                                std::optional<ImperfectionParams> fourier_imp = std::nullopt) {
    McResult result;
    result.summary.trials = trials;
    if (trials < 0) throw std::invalid_argument("run_monte_carlo: negative trial count");
    if (trials == 0) return result;

    const ProtocolSampler sampler(coeffs, fourier_imp);
    const long long chunks = (trials + kMcChunkSize - 1) / kMcChunkSize;
    result.trials.resize(static_cast<size_t>(trials));

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<long long>(workers, chunks));

    std::atomic<long long> next_chunk{0};
    auto work = [&]() {
        for (;;) {
            const long long c = next_chunk.fetch_add(1);
            if (c >= chunks) return;
            Rng rng(seed, static_cast<std::uint64_t>(c));
            const long long lo = c * kMcChunkSize;
            const long long hi = std::min(trials, lo + kMcChunkSize);
            for (long long i = lo; i < hi; ++i)
                result.trials[static_cast<size_t>(i)] = sampler.sample(det, rng);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    double fid_sum = 0.0;
    for (const auto& t : result.trials) {
        ++result.summary.class_counts[to_string(t.final_class.tag)];
        if (t.homodyne_misread) ++result.summary.misreads;
        fid_sum += t.fidelity;
    }
    result.summary.mean_fidelity = fid_sum / static_cast<double>(trials);
    return result;
}

}  // namespace qecp
