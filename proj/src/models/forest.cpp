/*
 * Copyright 2026 The sal Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include <algorithm>
#include <limits>

#include "sal/regress.hpp"
#include "sal/rng.hpp"

namespace sal {

double RegressionTree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    int id = 0;
    while (nodes[static_cast<std::size_t>(id)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(id)];
        id = x(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(id)].value;
}

int RegressionTree::leaf_count() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double cost = 0.0;  // left SSE + right SSE
};

class TreeBuilder {
public:
    TreeBuilder(const TrainingSet& ts, int min_split) : ts_(ts), min_split_(min_split) {}

    RegressionTree build(std::vector<Index> samples) {
        tree_.nodes.clear();
        grow(samples);
        return std::move(tree_);
    }

private:
    int grow(std::vector<Index>& samples) {
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        double sum = 0.0;
        for (Index s : samples) sum += ts_.responses(s);
        const double mean = sum / static_cast<double>(samples.size());
        tree_.nodes[static_cast<std::size_t>(id)].value = mean;
        tree_.nodes[static_cast<std::size_t>(id)].n_samples = static_cast<int>(samples.size());

        const bool pure = std::all_of(samples.begin(), samples.end(),
                                      [&](Index s) { return ts_.responses(s) == ts_.responses(samples.front()); });
        if (pure || static_cast<int>(samples.size()) < min_split_) return id;

        const Split split = best_split(samples);
        if (split.feature < 0) return id;

        std::vector<Index> left, right;
        for (Index s : samples) (ts_.inputs(s, split.feature) <= split.threshold ? left : right).push_back(s);
        const int l = grow(left);
        const int r = grow(right);
        TreeNode& node = tree_.nodes[static_cast<std::size_t>(id)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    // Exhaustive variance-reduction search over every feature and every midpoint
    // between consecutive distinct values. Ties keep the earliest candidate.
    // Returns feature -1 only when all inputs in the node coincide.
    Split best_split(const std::vector<Index>& samples) const {
        const std::size_t n = samples.size();
        Split best;
        best.cost = std::numeric_limits<double>::infinity();
        double total = 0.0, total_sq = 0.0;
        for (Index s : samples) {
            total += ts_.responses(s);
            total_sq += ts_.responses(s) * ts_.responses(s);
        }
        std::vector<Index> order(samples);
        for (int f = 0; f < static_cast<int>(ts_.n_features()); ++f) {
            std::stable_sort(order.begin(), order.end(),
                             [&](Index a, Index b) { return ts_.inputs(a, f) < ts_.inputs(b, f); });
            double left = 0.0, left_sq = 0.0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                const double y = ts_.responses(order[k]);
                left += y;
                left_sq += y * y;
                const double xa = ts_.inputs(order[k], f);
                const double xb = ts_.inputs(order[k + 1], f);
                if (!(xa < xb)) continue;
                const double nl = static_cast<double>(k + 1);
                const double nr = static_cast<double>(n - k - 1);
                const double right = total - left;
                const double right_sq = total_sq - left_sq;
                const double cost = (left_sq - left * left / nl) + (right_sq - right * right / nr);
                if (cost < best.cost) {
                    best.feature = f;
                    best.threshold = 0.5 * (xa + xb);
                    if (best.threshold >= xb) best.threshold = xa;
                    best.cost = cost;
                }
            }
        }
        return best;
    }

    const TrainingSet& ts_;
    int min_split_;
    RegressionTree tree_;
};

} // namespace

ForestModel fit_forest(const TrainingSet& ts, const ForestOptions& options, std::uint64_t seed) {
    if (options.n_trees < 1) throw ValidationError("forest needs at least one tree");
    if (options.min_samples_split < 2) throw ValidationError("forest min_samples_split must be >= 2");
    Rng rng(mix_seed(seed));
    const Index n = ts.size();
    ForestModel m;
    m.trees.reserve(static_cast<std::size_t>(options.n_trees));
    TreeBuilder builder(ts, options.min_samples_split);
    for (int t = 0; t < options.n_trees; ++t) {
        std::vector<Index> boot(static_cast<std::size_t>(n));
        for (auto& b : boot) b = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
        m.trees.push_back(builder.build(std::move(boot)));
    }
    return m;
}

} // namespace sal
