// trajectories.cpp — Quantum-jump trajectories and ensemble statistics

#include "pmode/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "pmode/errors.hpp"
#include "pmode/integrator.hpp"
#include "pmode/rng.hpp"

namespace pmode {

void TrajectoryConfig::validate() const {
    if (n_traj < 1) {
        throw PreconditionError("TrajectoryConfig: n_traj must be at least 1");
    }
    if (!(dt_max > 0.0)) {
        throw PreconditionError("TrajectoryConfig: dt_max must be positive");
    }
    grid.validate();
    integrator.validate();
}

namespace {

constexpr double kJumpTimeResolution = 1e-10;

void apply_jump(const LindbladModel& model, StateVector& psi, double u, std::vector<JumpEvent>& jumps, double t) {
    const auto& channels = model.jumps();
    std::vector<double> weights(channels.size());
    double total = 0.0;
    for (std::size_t k = 0; k < channels.size(); ++k) {
        weights[k] = channels[k].rate == 0.0 ? 0.0 : channels[k].rate * (channels[k].op * psi).squaredNorm();
        total += weights[k];
    }
    if (!(total > 0.0)) {
        throw IntegrationError("mcwf_run: jump triggered but every channel has zero probability", t);
    }
    const double target = u * total;
    std::size_t chosen = channels.size() - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < channels.size(); ++k) {
        acc += weights[k];
        if (weights[k] > 0.0 && target <= acc) {
            chosen = k;
            break;
        }
    }
    while (weights[chosen] == 0.0) {
        --chosen;
    }
    StateVector next = channels[chosen].op * psi;
    psi = next / next.norm();
    jumps.push_back({t, chosen});
}

} // namespace

Trajectory mcwf_run(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg,
                    std::size_t index) {
    cfg.validate();
    if (static_cast<std::size_t>(psi0.size()) != model.dim()) {
        throw DimensionError("mcwf_run: state dimension differs from the model");
    }
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-9) {
        throw PreconditionError("mcwf_run: initial state must be normalized");
    }

    IntegratorConfig icfg = cfg.integrator;
    icfg.max_step = std::min(icfg.max_step, cfg.dt_max);
    const Operator& heff = model.effective_hamiltonian();
    DormandPrince45<StateVector> stepper([&heff](double, const StateVector& y) -> StateVector { return -kI * (heff * y); },
                                         icfg);

    CounterRng rng(cfg.seed, index);
    Trajectory out;
    out.times = cfg.grid.instants();
    out.states.reserve(out.times.size());
    out.states.push_back(psi0);

    StateVector psi = psi0;
    double t = out.times.front();
    double threshold = rng.uniform();
    for (std::size_t k = 1; k < out.times.size(); ++k) {
        const double t_out = out.times[k];
        while (t < t_out) {
            const double t_prev = t;
            const StateVector psi_prev = psi;
            stepper.step(t, psi, t_out);
            if (psi.squaredNorm() > threshold) {
                continue;
            }
            // Bisect the threshold crossing inside [t_prev, t].
            double lo = t_prev;
            double hi = t;
            while (hi - lo > kJumpTimeResolution * std::max(1.0, std::abs(hi))) {
                const double mid = 0.5 * (lo + hi);
                const StateVector trial = stepper.try_step(t_prev, psi_prev, mid - t_prev).y;
                if (trial.squaredNorm() > threshold) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if (hi < t) {
                psi = stepper.try_step(t_prev, psi_prev, hi - t_prev).y;
                t = hi;
            }
            apply_jump(model, psi, rng.uniform(), out.jumps, t);
            threshold = rng.uniform();
        }
        out.states.push_back(psi / psi.norm());
    }
    return out;
}

std::size_t default_thread_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PSEUDOMODE_NUM_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap > 0) {
                n = std::min(n, static_cast<std::size_t>(cap));
            }
        } catch (const std::exception&) {
            // Unparseable values are ignored.
        }
    }
    return n;
}

namespace {

constexpr std::size_t kBlockSize = 64;

struct BlockSums {
    std::vector<Operator> rho;
    std::vector<std::vector<Complex>> obs;
    std::vector<std::vector<double>> obs_sq;
    std::vector<std::size_t> histogram;
};

} // namespace

EnsembleStats ensemble_average(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg,
                               const std::vector<Operator>& observables, std::size_t n_threads) {
    cfg.validate();
    for (const Operator& o : observables) {
        if (static_cast<std::size_t>(o.rows()) != model.dim() || o.rows() != o.cols()) {
            throw DimensionError("ensemble_average: observable dimension differs from the model");
        }
    }
    const std::vector<double> times = cfg.grid.instants();
    const std::size_t n_inst = times.size();
    const auto dim = static_cast<Eigen::Index>(model.dim());
    const std::size_t n_blocks = (cfg.n_traj + kBlockSize - 1) / kBlockSize;

    std::vector<BlockSums> blocks(n_blocks);
    std::atomic<std::size_t> next_block{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= n_blocks) {
                return;
            }
            try {
                BlockSums sums;
                sums.rho.assign(n_inst, Operator::Zero(dim, dim));
                sums.obs.assign(observables.size(), std::vector<Complex>(n_inst, 0.0));
                sums.obs_sq.assign(observables.size(), std::vector<double>(n_inst, 0.0));
                const std::size_t end = std::min(cfg.n_traj, (b + 1) * kBlockSize);
                for (std::size_t i = b * kBlockSize; i < end; ++i) {
                    const Trajectory tr = mcwf_run(model, psi0, cfg, i);
                    for (std::size_t k = 0; k < n_inst; ++k) {
                        const StateVector& psi = tr.states[k];
                        sums.rho[k].noalias() += psi * psi.adjoint();
                        for (std::size_t o = 0; o < observables.size(); ++o) {
                            const Complex v = psi.dot(observables[o] * psi);
                            sums.obs[o][k] += v;
                            sums.obs_sq[o][k] += std::norm(v);
                        }
                    }
                    if (sums.histogram.size() <= tr.jumps.size()) {
                        sums.histogram.resize(tr.jumps.size() + 1, 0);
                    }
                    ++sums.histogram[tr.jumps.size()];
                }
                blocks[b] = std::move(sums);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next_block.store(n_blocks);
                return;
            }
        }
    };

    const std::size_t threads = std::min(n_threads == 0 ? default_thread_count() : n_threads, n_blocks);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    EnsembleStats stats;
    stats.n_traj = cfg.n_traj;
    stats.times = times;
    stats.mean_states.assign(n_inst, Operator::Zero(dim, dim));
    stats.observable_means.assign(observables.size(), std::vector<Complex>(n_inst, 0.0));
    std::vector<std::vector<double>> sq(observables.size(), std::vector<double>(n_inst, 0.0));
    for (const BlockSums& s : blocks) {
        for (std::size_t k = 0; k < n_inst; ++k) {
            stats.mean_states[k] += s.rho[k];
            for (std::size_t o = 0; o < observables.size(); ++o) {
                stats.observable_means[o][k] += s.obs[o][k];
                sq[o][k] += s.obs_sq[o][k];
            }
        }
        if (stats.jump_histogram.size() < s.histogram.size()) {
            stats.jump_histogram.resize(s.histogram.size(), 0);
        }
        for (std::size_t j = 0; j < s.histogram.size(); ++j) {
            stats.jump_histogram[j] += s.histogram[j];
        }
    }

    const auto n = static_cast<double>(cfg.n_traj);
    for (Operator& rho : stats.mean_states) {
        rho /= n;
    }
    for (auto& means : stats.observable_means) {
        for (Complex& m : means) {
            m /= n;
        }
    }
    if (cfg.n_traj > 1) {
        std::vector<std::vector<double>> se(observables.size(), std::vector<double>(n_inst, 0.0));
        for (std::size_t o = 0; o < observables.size(); ++o) {
            for (std::size_t k = 0; k < n_inst; ++k) {
                const double var = std::max(0.0, (sq[o][k] - n * std::norm(stats.observable_means[o][k])) / (n - 1.0));
                se[o][k] = std::sqrt(var / n);
            }
        }
        stats.observable_stderr = std::move(se);
    }
    return stats;
}

} // namespace pmode
