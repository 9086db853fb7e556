#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kaclab {

/// Ambient groups supported by the workbench: Z^d and finite direct
/// products of cyclic groups. Elements are integer coordinate vectors,
/// one coordinate per factor; cyclic coordinates live in [0, order).
struct Group {
    enum class Kind { zd, finite_product };

    Kind kind = Kind::zd;
    int rank = 1;
    std::vector<int64_t> orders; // finite_product only, one entry per factor

    static Group z(int d = 1);
    static Group cyclic(int64_t n);
    static Group product_of_cyclic(std::vector<int64_t> orders);

    bool finite() const { return kind == Kind::finite_product; }
    uint64_t order() const; // finite groups only
    uint64_t id() const;    // structural tag used to reject cross-group arguments
    std::string name() const;

    bool operator==(const Group&) const = default;
};

struct GroupElement {
    uint64_t gid = 0;
    std::vector<int64_t> v;

    bool operator==(const GroupElement&) const = default;
};

GroupElement identity(const Group& g);
GroupElement element(const Group& g, std::vector<int64_t> coords);
GroupElement compose(const Group& g, const GroupElement& a, const GroupElement& b);
GroupElement invert(const Group& g, const GroupElement& a);
bool is_identity(const GroupElement& a);
std::string to_string(const GroupElement& a);

// Squared Euclidean norm of the coordinate vector.
int64_t norm2(const std::vector<int64_t>& v);
inline int64_t norm2(const GroupElement& a) { return norm2(a.v); }

// (norm^2, lexicographic) order used by Z^d enumerations.
bool norm_lex_less(const std::vector<int64_t>& a, const std::vector<int64_t>& b);

/// Canonical bijection g: N -> Gamma. For Z^d the order is squared norm
/// with lexicographic tie-break, so n -> |g(n)| is non-decreasing and
/// g(0) is the identity. Finite products enumerate in mixed-radix order,
/// identity first.
class Enumeration {
public:
    explicit Enumeration(Group g);

    const Group& group() const { return group_; }

    GroupElement at(uint64_t n) const;
    uint64_t index_of(const GroupElement& a) const;
    std::optional<uint64_t> size() const; // |Gamma| when finite

private:
    void extend_to_count(uint64_t n) const;
    void extend_to_norm2(int64_t m2) const;

    Group group_;
    mutable std::vector<std::vector<int64_t>> sorted_; // Z^d: all v with |v|^2 <= covered_norm2_
    mutable int64_t covered_norm2_ = -1;
};

} // namespace kaclab
