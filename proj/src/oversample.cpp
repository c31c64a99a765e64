#include "imbtk/oversample.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "imbtk/rng.hpp"
#include "imbtk/warnings.hpp"

namespace imbtk {

std::string method_name(Method m) {
    switch (m) {
        case Method::random: return "random";
        case Method::smote: return "smote";
        case Method::b1: return "b1";
        case Method::b2: return "b2";
        case Method::adasyn: return "adasyn";
    }
    return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
    if (name == "random") return Method::random;
    if (name == "smote") return Method::smote;
    if (name == "b1") return Method::b1;
    if (name == "b2") return Method::b2;
    if (name == "adasyn") return Method::adasyn;
    return std::nullopt;
}

BalancePlan plan_balance(const ClassPartition& part) {
    if (part.counts.empty()) {
        throw std::invalid_argument("cannot plan a balance over an empty partition");
    }
    BalancePlan plan;
    plan.target = part.majority_count();
    plan.quota.reserve(part.counts.size());
    for (std::size_t count : part.counts) {
        plan.quota.push_back(plan.target - count);
    }
    return plan;
}

std::vector<double> smote_interpolate(std::span<const double> s, std::span<const double> a,
                                      std::span<const double> lambda) {
    if (s.size() != a.size() || s.size() != lambda.size()) {
        throw std::invalid_argument("smote_interpolate: length mismatch");
    }
    std::vector<double> out(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
        out[j] = s[j] + lambda[j] * (a[j] - s[j]);
    }
    return out;
}

DangerLabel assign_danger(const NeighborSet& ns, std::size_t k) {
    const std::size_t h = ns.out_of_class_count;
    if (h > k) {
        throw std::invalid_argument("out-of-class count exceeds K");
    }
    if (h == k) return DangerLabel::Noise;
    if (2 * h >= k) return DangerLabel::Danger;
    return DangerLabel::Safe;
}

std::vector<double> adasyn_weights(const std::vector<std::size_t>& minority_rows,
                                   const NeighborIndex& idx, std::size_t k) {
    if (minority_rows.empty()) {
        throw std::invalid_argument("adasyn_weights: empty minority class");
    }
    std::vector<double> ratios(minority_rows.size());
    double total = 0.0;
    for (std::size_t i = 0; i < minority_rows.size(); ++i) {
        const NeighborSet ns = idx.knn_all(minority_rows[i], k);
        ratios[i] = static_cast<double>(ns.out_of_class_count) / static_cast<double>(k);
        total += ratios[i];
    }
    if (total == 0.0) {
        std::fill(ratios.begin(), ratios.end(), 1.0 / static_cast<double>(ratios.size()));
        return ratios;
    }
    for (double& r : ratios) r /= total;
    return ratios;
}

std::vector<std::size_t> allocate_counts(const std::vector<double>& weights, std::size_t quota) {
    if (weights.empty()) {
        throw std::invalid_argument("allocate_counts: no weights");
    }
    const std::size_t n = weights.size();
    std::vector<std::size_t> counts(n);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        counts[i] = static_cast<std::size_t>(
            std::floor(weights[i] * static_cast<double>(quota)));
        assigned += counts[i];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&weights](std::size_t a, std::size_t b) {
        return weights[a] > weights[b];
    });
    std::size_t cursor = 0;
    while (assigned < quota) {
        ++counts[order[cursor]];
        ++assigned;
        cursor = (cursor + 1) % n;
    }
    return counts;
}

namespace {

struct BatchBuilder {
    explicit BatchBuilder(std::size_t cols) { batch.cols = cols; }

    void add(std::span<const double> values, int label, Provenance prov) {
        batch.values.insert(batch.values.end(), values.begin(), values.end());
        batch.labels.push_back(label);
        batch.provenance.push_back(std::move(prov));
    }

    SyntheticBatch batch;
};

std::vector<double> draw_lambda(Rng& rng, std::size_t p, LambdaMode mode, double max) {
    std::vector<double> lambda(p);
    if (mode == LambdaMode::per_sample) {
        std::fill(lambda.begin(), lambda.end(), rng.uniform_real(max));
    } else {
        for (double& l : lambda) l = rng.uniform_real(max);
    }
    return lambda;
}

/// Parent schedule shared by the SMOTE-family methods: full round-robin
/// cycles over the pool starting at a random offset, then uniform draws for
/// whatever remainder is left.
std::vector<std::size_t> parent_schedule(const std::vector<std::size_t>& pool, std::size_t quota,
                                         Rng& rng) {
    const std::size_t n = pool.size();
    std::vector<std::size_t> schedule;
    schedule.reserve(quota);
    const std::size_t cycles = quota / n;
    const std::size_t remainder = quota % n;
    const std::size_t start = rng.uniform_below(n);
    for (std::size_t c = 0; c < cycles; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            schedule.push_back(pool[(start + i) % n]);
        }
    }
    for (std::size_t i = 0; i < remainder; ++i) {
        schedule.push_back(pool[rng.uniform_below(n)]);
    }
    return schedule;
}

void duplicate_class(BatchBuilder& builder, const FeatureTable& t,
                     const std::vector<std::size_t>& members, std::size_t quota, int cls,
                     Method method, Rng& rng) {
    for (std::size_t i = 0; i < quota; ++i) {
        const std::size_t parent = members[rng.uniform_below(members.size())];
        builder.add(t.row(parent), cls, Provenance{method, parent, std::nullopt, {}});
    }
}

/// Lazily computed within-class neighbor sets, one per distinct parent.
class WithinCache {
public:
    WithinCache(const NeighborIndex& idx, std::size_t k, int cls) : idx_(idx), k_(k), cls_(cls) {}

    const NeighborSet& get(std::size_t parent) {
        auto it = cache_.find(parent);
        if (it == cache_.end()) {
            it = cache_.emplace(parent, idx_.knn_within(parent, k_, cls_)).first;
        }
        return it->second;
    }

private:
    const NeighborIndex& idx_;
    std::size_t k_;
    int cls_;
    std::map<std::size_t, NeighborSet> cache_;
};

/// Same idea for all-class neighbor sets (borderline-2).
class AllCache {
public:
    AllCache(const NeighborIndex& idx, std::size_t k) : idx_(idx), k_(k) {}

    const NeighborSet& get(std::size_t parent) {
        auto it = cache_.find(parent);
        if (it == cache_.end()) {
            it = cache_.emplace(parent, idx_.knn_all(parent, k_)).first;
        }
        return it->second;
    }

private:
    const NeighborIndex& idx_;
    std::size_t k_;
    std::map<std::size_t, NeighborSet> cache_;
};

void check_class_population(const std::vector<std::size_t>& members, int cls,
                            const SamplerConfig& cfg) {
    if (members.empty()) {
        throw std::runtime_error("class " + std::to_string(cls) +
                                 " has a positive quota but no instances");
    }
    if (members.size() == 1 && !cfg.single_member_fallback) {
        throw std::runtime_error("class " + std::to_string(cls) +
                                 " has a single instance; enable the single-member fallback to "
                                 "duplicate it instead");
    }
}

std::vector<std::size_t> danger_members(const std::vector<std::size_t>& members,
                                        const NeighborIndex& idx, std::size_t k) {
    std::vector<std::size_t> danger;
    for (std::size_t row : members) {
        if (assign_danger(idx.knn_all(row, k), k) == DangerLabel::Danger) {
            danger.push_back(row);
        }
    }
    return danger;
}

enum class BorderlineVariant { none, b1, b2 };

SyntheticBatch smote_family(const FeatureTable& t, const BalancePlan& plan,
                            const SamplerConfig& cfg, const NeighborIndex& idx,
                            BorderlineVariant variant) {
    const ClassPartition part = partition(t);
    const Method method = variant == BorderlineVariant::none ? Method::smote
                          : variant == BorderlineVariant::b1 ? Method::b1
                                                             : Method::b2;
    BatchBuilder builder(t.cols());
    for (int cls = 1; cls <= part.num_classes(); ++cls) {
        const std::size_t quota = plan.for_class(cls);
        if (quota == 0) continue;
        const auto& members = part.members(cls);
        check_class_population(members, cls, cfg);
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(cls)));
        if (members.size() == 1) {
            warn("class " + std::to_string(cls) + " has a single instance; duplicating it");
            duplicate_class(builder, t, members, quota, cls, method, rng);
            continue;
        }

        bool use_all_neighbors = variant == BorderlineVariant::b2;
        const std::vector<std::size_t>* pool = &members;
        std::vector<std::size_t> danger;
        if (variant != BorderlineVariant::none) {
            danger = danger_members(members, idx, cfg.k);
            if (danger.empty()) {
                warn("class " + std::to_string(cls) +
                     " has no Danger instances; falling back to plain SMOTE");
                use_all_neighbors = false;
            } else {
                pool = &danger;
            }
        }

        WithinCache within(idx, cfg.k, cls);
        AllCache all(idx, cfg.k);
        const auto schedule = parent_schedule(*pool, quota, rng);
        for (std::size_t parent : schedule) {
            const NeighborSet& neighbors =
                use_all_neighbors ? all.get(parent) : within.get(parent);
            const auto& entry =
                neighbors.neighbors[rng.uniform_below(neighbors.neighbors.size())];
            const double lambda_max =
                use_all_neighbors && entry.label != cls ? cfg.b2_out_of_class_lambda_max : 1.0;
            const auto lambda = draw_lambda(rng, t.cols(), cfg.lambda_mode, lambda_max);
            const auto values = smote_interpolate(t.row(parent), t.row(entry.row), lambda);
            builder.add(values, cls, Provenance{method, parent, entry.row, lambda});
        }
    }
    return std::move(builder.batch);
}

}  // namespace

SyntheticBatch random_oversample(const FeatureTable& t, const BalancePlan& plan,
                                 const SamplerConfig& cfg) {
    const ClassPartition part = partition(t);
    BatchBuilder builder(t.cols());
    for (int cls = 1; cls <= part.num_classes(); ++cls) {
        const std::size_t quota = plan.for_class(cls);
        if (quota == 0) continue;
        const auto& members = part.members(cls);
        if (members.empty()) {
            throw std::runtime_error("class " + std::to_string(cls) +
                                     " has a positive quota but no instances");
        }
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(cls)));
        duplicate_class(builder, t, members, quota, cls, Method::random, rng);
    }
    return std::move(builder.batch);
}

SyntheticBatch smote(const FeatureTable& t, const BalancePlan& plan, const SamplerConfig& cfg,
                     const NeighborIndex& idx) {
    return smote_family(t, plan, cfg, idx, BorderlineVariant::none);
}

SyntheticBatch borderline1(const FeatureTable& t, const BalancePlan& plan,
                           const SamplerConfig& cfg, const NeighborIndex& idx) {
    return smote_family(t, plan, cfg, idx, BorderlineVariant::b1);
}

SyntheticBatch borderline2(const FeatureTable& t, const BalancePlan& plan,
                           const SamplerConfig& cfg, const NeighborIndex& idx) {
    return smote_family(t, plan, cfg, idx, BorderlineVariant::b2);
}

SyntheticBatch adasyn(const FeatureTable& t, const BalancePlan& plan, const SamplerConfig& cfg,
                      const NeighborIndex& idx) {
    const ClassPartition part = partition(t);
    BatchBuilder builder(t.cols());
    for (int cls = 1; cls <= part.num_classes(); ++cls) {
        const std::size_t quota = plan.for_class(cls);
        if (quota == 0) continue;
        const auto& members = part.members(cls);
        check_class_population(members, cls, cfg);
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(cls)));
        if (members.size() == 1) {
            warn("class " + std::to_string(cls) + " has a single instance; duplicating it");
            duplicate_class(builder, t, members, quota, cls, Method::adasyn, rng);
            continue;
        }
        const auto weights = adasyn_weights(members, idx, cfg.k);
        const auto counts = allocate_counts(weights, quota);
        WithinCache within(idx, cfg.k, cls);
        for (std::size_t i = 0; i < members.size(); ++i) {
            const std::size_t parent = members[i];
            for (std::size_t c = 0; c < counts[i]; ++c) {
                const NeighborSet& ns = within.get(parent);
                const auto& entry = ns.neighbors[rng.uniform_below(ns.neighbors.size())];
                const auto lambda = draw_lambda(rng, t.cols(), cfg.lambda_mode, 1.0);
                const auto values = smote_interpolate(t.row(parent), t.row(entry.row), lambda);
                builder.add(values, cls, Provenance{Method::adasyn, parent, entry.row, lambda});
            }
        }
    }
    return std::move(builder.batch);
}

SyntheticBatch oversample(const FeatureTable& t, const BalancePlan& plan,
                          const SamplerConfig& cfg, const NeighborIndex& idx) {
    switch (cfg.method) {
        case Method::random: return random_oversample(t, plan, cfg);
        case Method::smote: return smote(t, plan, cfg, idx);
        case Method::b1: return borderline1(t, plan, cfg, idx);
        case Method::b2: return borderline2(t, plan, cfg, idx);
        case Method::adasyn: return adasyn(t, plan, cfg, idx);
    }
    throw std::invalid_argument("unknown oversampling method");
}

FeatureTable append_batch(const FeatureTable& t, const SyntheticBatch& batch) {
    if (batch.rows() > 0 && batch.cols != t.cols()) {
        throw std::invalid_argument("batch width does not match table width");
    }
    FeatureTable out = t;
    out.values.insert(out.values.end(), batch.values.begin(), batch.values.end());
    out.labels.insert(out.labels.end(), batch.labels.begin(), batch.labels.end());
    return out;
}

}  // namespace imbtk
