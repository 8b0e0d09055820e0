#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rooneysim {

// G_X is the underrepresented group (blue tiles), G_Y the overrepresented one
// (red tiles).
enum class Group : std::uint8_t { X = 0, Y = 1 };

struct CandidateRef {
    Group group = Group::X;
    std::size_t index = 0;

    friend auto operator<=>(const CandidateRef&, const CandidateRef&) = default;
};

std::string to_string(const CandidateRef& ref);  // "X1", "Y3" (1-based)

// A selected subset of candidates. Members are kept in canonical order
// (all X by ascending index, then all Y by ascending index), so two shortlists
// holding the same set compare equal.
class Shortlist {
public:
    Shortlist() = default;
    explicit Shortlist(std::vector<CandidateRef> members);

    const std::vector<CandidateRef>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    std::size_t count(Group group) const noexcept;
    bool contains(const CandidateRef& ref) const noexcept;
    std::string to_string() const;

    friend bool operator==(const Shortlist&, const Shortlist&) = default;

private:
    std::vector<CandidateRef> members_;
};

// Total order used to break ties: higher value first, then X before Y,
// then ascending index.
bool precedes(double value_a, const CandidateRef& a, double value_b, const CandidateRef& b) noexcept;

// x_observed[i] = beta * x_latent[i]. Throws DomainError for beta outside
// [0, 1] or negative utilities.
std::vector<double> apply_bias(std::span<const double> x_latent, double beta);

// Sum of the referenced values; with latent vectors this is U, with observed
// vectors U_obs. Throws InternalError on an out-of-range reference.
double total_utility(const Shortlist& shortlist, std::span<const double> x_values, std::span<const double> y_values);

// Latent utility of the X (resp. Y) members only.
double group_utility(const Shortlist& shortlist, Group group, std::span<const double> values);

// Maximizes total observed utility over all size-k subsets with at least ell
// X members: the ell best X candidates, then the k - ell best of the rest.
// Throws ConstraintError when ell > |x|, ell > k or k > n.
Shortlist select_shortlist(std::span<const double> x_observed, std::span<const double> y_observed, std::size_t k,
                           std::size_t ell);

// Exhaustive reference for select_shortlist. Among equal-utility subsets it
// returns the one whose members, listed in precedes() order, are
// lexicographically first. Refuses n > kBruteForceLimit.
inline constexpr std::size_t kBruteForceLimit = 20;
Shortlist brute_force_shortlist(std::span<const double> x_observed, std::span<const double> y_observed,
                                std::size_t k, std::size_t ell);

}  // namespace rooneysim
