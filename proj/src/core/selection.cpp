#include "rooneysim/core/selection.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rooneysim/core/error.hpp"

namespace rooneysim {

std::string to_string(const CandidateRef& ref) {
    return (ref.group == Group::X ? "X" : "Y") + std::to_string(ref.index + 1);
}

Shortlist::Shortlist(std::vector<CandidateRef> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw InternalError("shortlist contains a duplicate candidate");
    }
}

std::size_t Shortlist::count(Group group) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(members_.begin(), members_.end(), [group](const CandidateRef& r) { return r.group == group; }));
}

bool Shortlist::contains(const CandidateRef& ref) const noexcept {
    return std::binary_search(members_.begin(), members_.end(), ref);
}

std::string Shortlist::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i != 0) os << ", ";
        os << rooneysim::to_string(members_[i]);
    }
    os << '}';
    return os.str();
}

bool precedes(double value_a, const CandidateRef& a, double value_b, const CandidateRef& b) noexcept {
    if (value_a != value_b) return value_a > value_b;
    if (a.group != b.group) return a.group == Group::X;
    return a.index < b.index;
}

std::vector<double> apply_bias(std::span<const double> x_latent, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("apply_bias: beta must lie in [0, 1]");
    std::vector<double> out;
    out.reserve(x_latent.size());
    for (double x : x_latent) {
        if (x < 0.0) throw DomainError("apply_bias: latent utilities must be non-negative");
        out.push_back(beta * x);
    }
    return out;
}

namespace {

double value_of(const CandidateRef& ref, std::span<const double> x, std::span<const double> y) {
    const auto values = ref.group == Group::X ? x : y;
    if (ref.index >= values.size()) {
        throw InternalError("candidate reference " + to_string(ref) + " out of range");
    }
    return values[ref.index];
}

void check_feasible(std::size_t n_x, std::size_t n_y, std::size_t k, std::size_t ell) {
    if (ell > k) throw ConstraintError("infeasible selection: ell exceeds k");
    if (ell > n_x) throw ConstraintError("infeasible selection: ell exceeds the number of X candidates");
    if (k > n_x + n_y) throw ConstraintError("infeasible selection: k exceeds the number of candidates");
}

// Indices of the best `count` entries of one group, in precedes() order.
std::vector<std::size_t> best_of_group(std::span<const double> values, Group group, std::size_t count) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    count = std::min(count, idx.size());
    auto better = [&](std::size_t a, std::size_t b) {
        return precedes(values[a], {group, a}, values[b], {group, b});
    };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(), better);
    idx.resize(count);
    return idx;
}

}  // namespace

double total_utility(const Shortlist& shortlist, std::span<const double> x_values, std::span<const double> y_values) {
    double total = 0.0;
    for (const auto& ref : shortlist.members()) total += value_of(ref, x_values, y_values);
    return total;
}

double group_utility(const Shortlist& shortlist, Group group, std::span<const double> values) {
    double total = 0.0;
    for (const auto& ref : shortlist.members()) {
        if (ref.group != group) continue;
        if (ref.index >= values.size()) throw InternalError("candidate reference " + to_string(ref) + " out of range");
        total += values[ref.index];
    }
    return total;
}

Shortlist select_shortlist(std::span<const double> x_observed, std::span<const double> y_observed, std::size_t k,
                           std::size_t ell) {
    check_feasible(x_observed.size(), y_observed.size(), k, ell);
    const auto best_x = best_of_group(x_observed, Group::X, k);
    const auto best_y = best_of_group(y_observed, Group::Y, k);

    std::vector<CandidateRef> chosen;
    chosen.reserve(k);
    std::size_t i = 0;
    for (; i < ell; ++i) chosen.push_back({Group::X, best_x[i]});
    std::size_t j = 0;
    while (chosen.size() < k) {
        const bool x_left = i < best_x.size();
        const bool y_left = j < best_y.size();
        bool take_x;
        if (x_left && y_left) {
            take_x = precedes(x_observed[best_x[i]], {Group::X, best_x[i]}, y_observed[best_y[j]],
                              {Group::Y, best_y[j]});
        } else {
            take_x = x_left;
        }
        if (take_x) {
            chosen.push_back({Group::X, best_x[i++]});
        } else {
            chosen.push_back({Group::Y, best_y[j++]});
        }
    }
    return Shortlist(std::move(chosen));
}

Shortlist brute_force_shortlist(std::span<const double> x_observed, std::span<const double> y_observed,
                                std::size_t k, std::size_t ell) {
    const std::size_t n_x = x_observed.size();
    const std::size_t n = n_x + y_observed.size();
    if (n > kBruteForceLimit) throw ConstraintError("brute_force_shortlist refuses n > 20");
    check_feasible(n_x, y_observed.size(), k, ell);

    std::vector<CandidateRef> all;
    std::vector<double> value;
    for (std::size_t i = 0; i < n_x; ++i) all.push_back({Group::X, i});
    for (std::size_t j = 0; j < y_observed.size(); ++j) all.push_back({Group::Y, j});
    for (const auto& r : all) value.push_back(value_of(r, x_observed, y_observed));

    // rank[c] = position of candidate c in precedes() order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return precedes(value[a], all[a], value[b], all[b]); });

    bool have_best = false;
    double best_total = 0.0;
    std::vector<std::size_t> best_ranks;
    std::uint32_t best_mask = 0;

    const std::uint32_t limit = std::uint32_t{1} << n;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
        std::size_t x_count = 0;
        for (std::size_t c = 0; c < n_x; ++c) x_count += (mask >> c) & 1U;
        if (x_count < ell) continue;

        // Members in rank order; summing in that order makes the total canonical.
        std::vector<std::size_t> ranks;
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t c = order[r];
            if ((mask >> c) & 1U) {
                ranks.push_back(r);
                total += value[c];
            }
        }
        if (!have_best || total > best_total || (total == best_total && ranks < best_ranks)) {
            have_best = true;
            best_total = total;
            best_ranks = std::move(ranks);
            best_mask = mask;
        }
    }

    std::vector<CandidateRef> chosen;
    for (std::size_t c = 0; c < n; ++c) {
        if ((best_mask >> c) & 1U) chosen.push_back(all[c]);
    }
    return Shortlist(std::move(chosen));
}

}  // namespace rooneysim
