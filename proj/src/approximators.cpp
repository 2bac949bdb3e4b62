#include "pqsq/approximators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

#include "pqsq/errors.hpp"
#include "pqsq/kernels.hpp"
#include "pqsq/rng.hpp"

namespace pqsq {

namespace {

using kernels::Ops;

void check_spec_matches(const DataMatrix& data, const PotentialSpec& spec) {
    if (spec.coordinates() != data.cols())
        throw std::invalid_argument("potential coordinate count != data columns");
}

// Objective sum_i w_i sum_k u(x_ik - center_k).
double center_objective(const DataMatrix& data, const PotentialSpec& spec,
                        const std::vector<double>& center, std::vector<double>& scratch) {
    const Ops& ops = kernels::active();
    const std::size_t n = data.rows();
    double total = 0.0;
    if (!data.has_weights()) {
        for (std::size_t k = 0; k < data.cols(); ++k)
            total += ops.potential_sum(data.col(k), center[k], spec.row(k), n);
    } else {
        scratch.resize(n);
        for (std::size_t k = 0; k < data.cols(); ++k) {
            ops.potential_eval(data.col(k), center[k], spec.row(k), scratch.data(), n);
            total += ops.dot(data.weights().data(), scratch.data(), n);
        }
    }
    return total;
}

void guard_descent(double prev, double next, const char* who) {
    if (next > prev + 1e-9 * (1.0 + std::fabs(prev)))
        throw numeric_error(std::string(who) + ": objective increased from " +
                            std::to_string(prev) + " to " + std::to_string(next));
}

std::vector<double> arithmetic_mean(const DataMatrix& data) {
    const Ops& ops = kernels::active();
    const std::size_t n = data.rows();
    std::vector<double> mean(data.cols());
    if (!data.has_weights()) {
        for (std::size_t k = 0; k < data.cols(); ++k)
            mean[k] = ops.sum(data.col(k), n) / static_cast<double>(n);
    } else {
        const double wsum = ops.sum(data.weights().data(), n);
        if (wsum <= 0.0) throw std::invalid_argument("total weight must be positive");
        for (std::size_t k = 0; k < data.cols(); ++k)
            mean[k] = ops.dot(data.weights().data(), data.col(k), n) / wsum;
    }
    return mean;
}

// Largest-eigenvalue direction of the (uncentered) scatter of `data`.
std::vector<double> l2_first_component(const DataMatrix& data) {
    const Eigen::Map<const Eigen::MatrixXd> m(
        data.col(0), static_cast<Eigen::Index>(data.rows()),
        static_cast<Eigen::Index>(data.cols()));
    const Eigen::MatrixXd cov = m.transpose() * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    Eigen::VectorXd v = eig.eigenvectors().col(cov.cols() - 1);
    return {v.data(), v.data() + v.size()};
}

void canonicalize_sign(std::vector<double>& v, std::vector<double>& nu) {
    std::size_t arg = 0;
    for (std::size_t k = 1; k < v.size(); ++k)
        if (std::fabs(v[k]) > std::fabs(v[arg])) arg = k;
    if (v[arg] < 0.0) {
        for (double& x : v) x = -x;
        for (double& x : nu) x = -x;
    }
}

}  // namespace

double pqsq_error(const std::vector<double>& x, const std::vector<double>& y,
                  const PotentialSpec& spec) {
    if (x.size() != y.size() || x.size() != spec.coordinates())
        throw std::invalid_argument("pqsq_error: dimension mismatch");
    double total = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) total += spec.evaluate(k, x[k] - y[k]);
    return total;
}

MeanResult pqsq_mean(const DataMatrix& data, const PotentialSpec& spec,
                     const MeanOptions& opts) {
    check_spec_matches(data, spec);
    if (data.rows() == 0) throw std::invalid_argument("pqsq_mean: empty data");
    const Ops& ops = kernels::active();
    const std::size_t n = data.rows();
    const std::size_t m = data.cols();

    MeanResult result;
    std::vector<double> center = opts.init.empty() ? arithmetic_mean(data) : opts.init;
    if (center.size() != m) throw std::invalid_argument("pqsq_mean: init dimension mismatch");
    for (double c : center)
        if (!std::isfinite(c)) throw std::invalid_argument("pqsq_mean: non-finite init");

    std::vector<double> scratch;
    std::vector<double> weights(n);
    double objective = center_objective(data, spec, center, scratch);
    result.objective_trace.push_back(objective);

    const double* w = data.has_weights() ? data.weights().data() : nullptr;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        result.stalled_coordinates.clear();
        double max_change = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            ops.interval_weights(data.col(k), center[k], spec.row(k), weights.data(), n);
            double num, den;
            if (w) {
                num = ops.dot3(weights.data(), w, data.col(k), n);
                den = ops.dot(weights.data(), w, n);
            } else {
                num = ops.dot(weights.data(), data.col(k), n);
                den = ops.sum(weights.data(), n);
            }
            if (den <= 0.0) {
                result.stalled_coordinates.push_back(k);  // keep previous value
                continue;
            }
            const double next = num / den;
            max_change = std::max(max_change, std::fabs(next - center[k]));
            center[k] = next;
        }
        const double next_objective = center_objective(data, spec, center, scratch);
        guard_descent(objective, next_objective, "pqsq_mean");
        objective = next_objective;
        result.objective_trace.push_back(objective);
        result.iterations = iter;
        if (max_change <= opts.tol) {
            result.point = std::move(center);
            return result;
        }
    }
    throw numeric_error("pqsq_mean: no convergence within " + std::to_string(opts.max_iter) +
                        " iterations");
}

namespace {

struct Assignment {
    std::vector<std::int32_t> labels;  // 0-based here
    std::vector<double> best_error;    // unweighted per-point error
    double total = 0.0;                // weighted
};

Assignment assign_points(const DataMatrix& data, const PotentialSpec& spec,
                         const std::vector<std::vector<double>>& centroids) {
    const Ops& ops = kernels::active();
    const std::size_t n = data.rows();
    Assignment out;
    out.labels.assign(n, -1);
    out.best_error.assign(n, std::numeric_limits<double>::infinity());
    std::vector<double> cand(n);
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        std::fill(cand.begin(), cand.end(), 0.0);
        for (std::size_t k = 0; k < data.cols(); ++k)
            ops.potential_accum(data.col(k), centroids[c][k], spec.row(k), cand.data(), n);
        ops.argmin_merge(out.best_error.data(), out.labels.data(), cand.data(),
                         static_cast<std::int32_t>(c), n);
    }
    out.total = 0.0;
    for (std::size_t i = 0; i < n; ++i) out.total += data.weight(i) * out.best_error[i];
    return out;
}

DataMatrix gather_rows(const DataMatrix& data, const std::vector<std::size_t>& idx) {
    DataMatrix out(idx.size(), data.cols());
    for (std::size_t k = 0; k < data.cols(); ++k) {
        const double* src = data.col(k);
        double* dst = out.col(k);
        for (std::size_t j = 0; j < idx.size(); ++j) dst[j] = src[idx[j]];
    }
    if (data.has_weights()) {
        std::vector<double> w(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) w[j] = data.weights()[idx[j]];
        out.set_weights(std::move(w));
    }
    return out;
}

ClusterModel kmeans_single(const DataMatrix& data, const PotentialSpec& spec,
                           std::vector<std::vector<double>> centroids,
                           const KMeansOptions& opts) {
    const std::size_t n = data.rows();
    const std::size_t kk = centroids.size();
    ClusterModel model;
    std::vector<std::int32_t> prev_labels;
    double prev_objective = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        Assignment asg = assign_points(data, spec, centroids);

        // reseed empty clusters at the worst-fitted point of a cluster
        // that can spare one
        std::vector<std::size_t> sizes(kk, 0);
        for (std::int32_t lbl : asg.labels) sizes[static_cast<std::size_t>(lbl)]++;
        for (std::size_t c = 0; c < kk; ++c) {
            if (sizes[c] > 0) continue;
            std::size_t pick = n;
            double worst = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[static_cast<std::size_t>(asg.labels[i])] < 2) continue;
                if (asg.best_error[i] > worst) {
                    worst = asg.best_error[i];
                    pick = i;
                }
            }
            if (pick == n) throw numeric_error("k-means: cannot repair empty cluster");
            sizes[static_cast<std::size_t>(asg.labels[pick])]--;
            asg.total -= data.weight(pick) * asg.best_error[pick];
            asg.labels[pick] = static_cast<std::int32_t>(c);
            asg.best_error[pick] = 0.0;
            centroids[c] = data.row(pick);
            sizes[c] = 1;
        }

        guard_descent(prev_objective, asg.total, "pqsq_kmeans");
        prev_objective = asg.total;
        model.objective_trace.push_back(asg.total);
        model.iterations = iter;

        if (asg.labels == prev_labels) {
            model.centroids = std::move(centroids);
            model.total_error = asg.total;
            model.labels.resize(n);
            for (std::size_t i = 0; i < n; ++i) model.labels[i] = asg.labels[i] + 1;
            return model;
        }
        prev_labels = asg.labels;

        // centroid update, warm-started so the objective cannot increase
        std::vector<std::vector<std::size_t>> members(kk);
        for (std::size_t i = 0; i < n; ++i)
            members[static_cast<std::size_t>(asg.labels[i])].push_back(i);
        double updated = 0.0;
        for (std::size_t c = 0; c < kk; ++c) {
            DataMatrix part = gather_rows(data, members[c]);
            MeanOptions mo = opts.mean;
            mo.init = centroids[c];
            MeanResult mr = pqsq_mean(part, spec, mo);
            centroids[c] = mr.point;
            updated += mr.objective_trace.back();
        }
        guard_descent(prev_objective, updated, "pqsq_kmeans");
        prev_objective = updated;
        model.objective_trace.push_back(updated);
    }
    throw numeric_error("pqsq_kmeans: no convergence within " + std::to_string(opts.max_iter) +
                        " iterations");
}

}  // namespace

ClusterModel pqsq_kmeans(const DataMatrix& data, std::size_t k, const PotentialSpec& spec,
                         const KMeansOptions& opts) {
    check_spec_matches(data, spec);
    const std::size_t n = data.rows();
    if (k < 1 || k > n) throw std::invalid_argument("pqsq_kmeans: need 1 <= k <= N");
    if (!opts.init_centroids.empty() && opts.init_centroids.size() != k)
        throw std::invalid_argument("pqsq_kmeans: init centroid count != k");
    const int restarts = std::max(1, opts.restarts);

    ClusterModel best;
    bool have_best = false;
    for (int r = 0; r < restarts; ++r) {
        std::vector<std::vector<double>> init;
        if (r == 0 && !opts.init_centroids.empty()) {
            init = opts.init_centroids;
        } else {
            // sample k distinct rows
            Rng rng(Rng::derive(opts.seed, static_cast<std::uint64_t>(r)));
            std::vector<std::size_t> pool(n);
            for (std::size_t i = 0; i < n; ++i) pool[i] = i;
            for (std::size_t j = 0; j < k; ++j)
                std::swap(pool[j], pool[j + rng.index(n - j)]);
            for (std::size_t j = 0; j < k; ++j) init.push_back(data.row(pool[j]));
        }
        ClusterModel model = kmeans_single(data, spec, std::move(init), opts);
        model.chosen_restart = r;
        model.seed = opts.seed;
        if (!have_best || model.total_error < best.total_error) {
            best = std::move(model);
            have_best = true;
        }
    }
    return best;
}

namespace {

// Column-major residual matrix x - center, shared by the direction fits.
DataMatrix centered_copy(const DataMatrix& data, const std::vector<double>& center) {
    DataMatrix out(data.rows(), data.cols());
    for (std::size_t k = 0; k < data.cols(); ++k) {
        const double* src = data.col(k);
        double* dst = out.col(k);
        for (std::size_t i = 0; i < data.rows(); ++i) dst[i] = src[i] - center[k];
    }
    return out;
}

}  // namespace

Pc1Result fit_pc1(const DataMatrix& data, const PotentialSpec& spec, const Pc1Options& opts) {
    check_spec_matches(data, spec);
    const Ops& ops = kernels::active();
    const std::size_t n = data.rows();
    const std::size_t m = data.cols();

    std::vector<double> center = opts.center;
    if (center.empty()) center = pqsq_mean(data, spec).point;
    if (center.size() != m) throw std::invalid_argument("fit_pc1: center dimension mismatch");
    const DataMatrix xd = centered_copy(data, center);

    std::vector<double> v = opts.init_v.empty() ? l2_first_component(xd) : opts.init_v;
    if (v.size() != m) throw std::invalid_argument("fit_pc1: init direction dimension mismatch");
    {
        double norm = 0.0;
        for (double x : v) norm += x * x;
        if (!(norm > 0.0)) throw std::invalid_argument("fit_pc1: init direction is zero");
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
    }

    // nu_i = sum_k v_k xd_ik  (v is unit)
    std::vector<double> nu(n, 0.0);
    for (std::size_t k = 0; k < m; ++k) ops.scaled_add(nu.data(), xd.col(k), v[k], n);

    std::vector<double> res(n), num(n), den(n);
    std::vector<double> a(n * m);
    std::vector<std::int32_t> idx(n * m), prev_idx;
    std::vector<double> v_new(m);
    Pc1Result result;
    result.center = center;
    double objective = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (int iter = 1; iter <= opts.max_iter && !converged; ++iter) {
        // freeze interval assignments at the current (v, nu)
        double obj = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            ops.residual(res.data(), xd.col(k), 0.0, nu.data(), v[k], n);
            ops.interval_index(res.data(), 0.0, spec.row(k), idx.data() + k * n, n);
            ops.interval_weights(res.data(), 0.0, spec.row(k), a.data() + k * n, n);
            obj += ops.potential_sum(res.data(), 0.0, spec.row(k), n);
        }
        if (iter > 1) guard_descent(objective, obj, "fit_pc1");
        objective = obj;
        result.objective_trace.push_back(obj);
        result.iterations = iter;

        if (!prev_idx.empty() && idx == prev_idx) {  // assignments stable
            converged = true;
            break;
        }
        prev_idx = idx;

        // projection update: nu'_i = sum_k a v xd / sum_k a v^2
        std::fill(num.begin(), num.end(), 0.0);
        std::fill(den.begin(), den.end(), 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            ops.scaled_mul_add(num.data(), a.data() + k * n, xd.col(k), v[k], n);
            ops.scaled_add(den.data(), a.data() + k * n, v[k] * v[k], n);
        }
        std::vector<double> nu_next(n);
        for (std::size_t i = 0; i < n; ++i)
            nu_next[i] = den[i] > 0.0 ? num[i] / den[i] : 0.0;

        // direction update from the chosen projection vector
        const std::vector<double>& nu_src = opts.sequential_updates ? nu_next : nu;
        double vnorm2 = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double* ak = a.data() + k * n;
            const double d2 = ops.dot3(ak, nu_src.data(), nu_src.data(), n);
            v_new[k] = d2 > 0.0 ? ops.dot3(ak, xd.col(k), nu_src.data(), n) / d2 : 0.0;
            vnorm2 += v_new[k] * v_new[k];
        }
        if (!(vnorm2 > 0.0))
            throw numeric_error("fit_pc1: direction collapsed to zero (all points trimmed)");
        const double vnorm = std::sqrt(vnorm2);
        for (double& x : v_new) x /= vnorm;

        double diff = 0.0, diff_flip = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            diff = std::max(diff, std::fabs(v_new[k] - v[k]));
            diff_flip = std::max(diff_flip, std::fabs(v_new[k] + v[k]));
        }
        v = v_new;
        nu = std::move(nu_next);
        if (std::min(diff, diff_flip) < opts.tol) converged = true;
    }
    if (!converged)
        throw numeric_error("fit_pc1: no convergence within " + std::to_string(opts.max_iter) +
                            " iterations");

    // final pass: make nu the exact projection for the returned direction
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    double error = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        ops.residual(res.data(), xd.col(k), 0.0, nu.data(), v[k], n);
        ops.interval_weights(res.data(), 0.0, spec.row(k), a.data() + k * n, n);
    }
    for (std::size_t k = 0; k < m; ++k) {
        ops.scaled_mul_add(num.data(), a.data() + k * n, xd.col(k), v[k], n);
        ops.scaled_add(den.data(), a.data() + k * n, v[k] * v[k], n);
    }
    for (std::size_t i = 0; i < n; ++i) nu[i] = den[i] > 0.0 ? num[i] / den[i] : 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        ops.residual(res.data(), xd.col(k), 0.0, nu.data(), v[k], n);
        error += ops.potential_sum(res.data(), 0.0, spec.row(k), n);
    }
    guard_descent(objective, error, "fit_pc1");
    result.objective_trace.push_back(error);

    canonicalize_sign(v, nu);
    result.v = std::move(v);
    result.nu = std::move(nu);
    result.error = error;
    return result;
}

namespace {

// Interval rebuild on residual columns; degenerate columns fall back to
// amplitude mode and finally to an inert unit distance.
PotentialSpec spec_for_residuals(const Majorant& majorant, const DataMatrix& work,
                                 const IntervalConfig& cfg) {
    std::vector<std::vector<double>> thresholds(work.cols());
    for (std::size_t k = 0; k < work.cols(); ++k) {
        double d = 0.0;
        if (cfg.distance == IntervalConfig::Distance::mad) {
            try {
                d = characteristic_distance(work.col(k), work.rows(), cfg);
            } catch (const numeric_error&) {
                d = 0.0;  // MAD degenerate: substitute amplitude
            }
        }
        if (d <= 0.0) {
            IntervalConfig amp = cfg;
            amp.distance = IntervalConfig::Distance::amplitude;
            d = characteristic_distance(work.col(k), work.rows(), amp);
        }
        if (d <= 0.0) d = 1.0;  // fully explained coordinate, thresholds inert
        thresholds[k] = default_intervals(d, cfg.count);
    }
    return build_potential(majorant, thresholds, cfg.trimmed);
}

PcaModel fit_pca_impl(const DataMatrix& data, std::size_t n_components,
                      const Majorant* majorant, const IntervalConfig* cfg,
                      const PotentialSpec* fixed_spec, const PcaOptions& opts) {
    if (n_components < 1 || n_components > data.cols())
        throw std::invalid_argument("fit_pca: need 1 <= components <= columns");
    const Ops& ops = kernels::active();
    const std::size_t n = data.rows();
    const std::size_t m = data.cols();
    const int restarts = std::max(1, opts.restarts);

    PcaModel model;
    model.seed = opts.seed;
    model.restarts = restarts;
    model.recompute_intervals = opts.recompute_intervals;
    if (cfg) model.interval_config = *cfg;
    if (majorant) {
        model.majorant_name = majorant->name();
        model.majorant_param = majorant->param();
    } else if (fixed_spec && fixed_spec->majorant()) {
        model.majorant_name = fixed_spec->majorant()->name();
        model.majorant_param = fixed_spec->majorant()->param();
    }

    const bool rebuild = majorant && cfg && cfg->explicit_thresholds.empty() &&
                         opts.recompute_intervals;
    PotentialSpec spec =
        fixed_spec ? *fixed_spec : build_potential_for_data(*majorant, data, *cfg);

    model.center = pqsq_mean(data, spec).point;
    DataMatrix work = centered_copy(data, model.center);
    const std::vector<double> zero_center(m, 0.0);

    for (std::size_t j = 0; j < n_components; ++j) {
        if (rebuild && j > 0) spec = spec_for_residuals(*majorant, work, *cfg);

        Rng rng(Rng::derive(opts.seed, j));
        Pc1Result best;
        int best_restart = -1;
        for (int r = 0; r < restarts; ++r) {
            Pc1Options po;
            po.center = zero_center;
            po.tol = opts.tol;
            po.max_iter = opts.max_iter;
            po.sequential_updates = opts.sequential_updates;
            if (r > 0) {
                std::vector<double> cand = work.row(rng.index(n));
                double norm = 0.0;
                for (double x : cand) norm += x * x;
                if (!(norm > 0.0)) continue;  // zero residual row, skip this start
                po.init_v = std::move(cand);
            }
            Pc1Result fit = fit_pc1(work, spec, po);
            if (best_restart < 0 || fit.error < best.error) {
                best = std::move(fit);
                best_restart = r;
            }
        }
        if (best_restart < 0) throw numeric_error("fit_pca: no usable restart");

        for (std::size_t k = 0; k < m; ++k)
            ops.residual(work.col(k), work.col(k), 0.0, best.nu.data(), best.v[k], n);

        model.components.push_back(best.v);
        model.projections.push_back(std::move(best.nu));
        model.component_error.push_back(best.error);
        model.chosen_restart.push_back(best_restart);
    }
    if (!opts.keep_projections) model.projections.clear();
    return model;
}

}  // namespace

PcaModel fit_pca(const DataMatrix& data, std::size_t n_components, const Majorant& majorant,
                 const IntervalConfig& cfg, const PcaOptions& opts) {
    return fit_pca_impl(data, n_components, &majorant, &cfg, nullptr, opts);
}

PcaModel fit_pca(const DataMatrix& data, std::size_t n_components, const PotentialSpec& spec,
                 const PcaOptions& opts) {
    check_spec_matches(data, spec);
    return fit_pca_impl(data, n_components, nullptr, nullptr, &spec, opts);
}

DataMatrix reconstruct(const PcaModel& model) { return reconstruct(model, model.center); }

DataMatrix reconstruct(const PcaModel& model, const std::vector<double>& center) {
    const std::size_t n =
        model.projections.empty() ? 0 : model.projections[0].size();
    if (n == 0 && !model.components.empty())
        throw std::invalid_argument("reconstruct: model has no stored projections");
    return reconstruct(model, center, n);
}

DataMatrix reconstruct(const PcaModel& model, const std::vector<double>& center,
                       std::size_t n_rows) {
    if (center.size() != model.dim())
        throw std::invalid_argument("reconstruct: center dimension mismatch");
    if (!model.components.empty() && model.projections.size() != model.components.size())
        throw std::invalid_argument("reconstruct: model has no stored projections");
    if (n_rows == 0) throw std::invalid_argument("reconstruct: need at least one row");
    const std::size_t m = model.dim();
    DataMatrix out(n_rows, m);
    for (std::size_t k = 0; k < m; ++k) {
        double* dst = out.col(k);
        for (std::size_t i = 0; i < n_rows; ++i) dst[i] = center[k];
        for (std::size_t j = 0; j < model.components.size(); ++j)
            kernels::active().scaled_add(dst, model.projections[j].data(),
                                         model.components[j][k], n_rows);
    }
    return out;
}

PotentialSpec build_potential_for_data(const Majorant& majorant, const DataMatrix& data,
                                       const IntervalConfig& cfg) {
    std::vector<std::vector<double>> thresholds(data.cols());
    if (!cfg.explicit_thresholds.empty()) {
        for (auto& row : thresholds) row = cfg.explicit_thresholds;
    } else {
        for (std::size_t k = 0; k < data.cols(); ++k) {
            const double d = characteristic_distance(data.col(k), data.rows(), cfg);
            if (d <= 0.0)
                throw numeric_error("degenerate coordinate " + std::to_string(k) +
                                    ": zero characteristic distance");
            thresholds[k] = default_intervals(d, cfg.count);
        }
    }
    return build_potential(majorant, thresholds, cfg.trimmed);
}

}  // namespace pqsq
