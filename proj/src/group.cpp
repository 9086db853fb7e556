#include "kaclab/group.hpp"

#include "kaclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kaclab {

namespace {

int64_t mod_floor(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

void check_same_group(const Group& g, const GroupElement& a) {
    if (a.gid != g.id() || a.v.size() != size_t(g.rank))
        throw std::invalid_argument("group element does not belong to " + g.name());
}

} // namespace

Group Group::z(int d) {
    if (d < 1 || d > 8) throw std::invalid_argument("Z^d supported for 1 <= d <= 8");
    Group g;
    g.kind = Kind::zd;
    g.rank = d;
    return g;
}

Group Group::cyclic(int64_t n) { return product_of_cyclic({n}); }

Group Group::product_of_cyclic(std::vector<int64_t> orders) {
    if (orders.empty()) throw std::invalid_argument("empty cyclic product");
    for (int64_t n : orders)
        if (n < 1) throw std::invalid_argument("cyclic factor order must be >= 1");
    Group g;
    g.kind = Kind::finite_product;
    g.rank = int(orders.size());
    g.orders = std::move(orders);
    return g;
}

uint64_t Group::order() const {
    if (!finite()) throw std::logic_error("order() on infinite group");
    uint64_t n = 1;
    for (int64_t o : orders) n *= uint64_t(o);
    return n;
}

uint64_t Group::id() const {
    uint64_t h = kind == Kind::zd ? 0x5a64 : 0xf1f0;
    h = h * 1000003u + uint64_t(rank);
    for (int64_t o : orders) h = h * 1000003u + uint64_t(o);
    return h;
}

std::string Group::name() const {
    if (kind == Kind::zd) return rank == 1 ? "Z" : "Z^" + std::to_string(rank);
    std::string s;
    for (size_t i = 0; i < orders.size(); ++i) {
        if (i) s += "x";
        s += "C" + std::to_string(orders[i]);
    }
    return s;
}

GroupElement identity(const Group& g) {
    return GroupElement{g.id(), std::vector<int64_t>(g.rank, 0)};
}

GroupElement element(const Group& g, std::vector<int64_t> coords) {
    if (coords.size() != size_t(g.rank))
        throw std::invalid_argument("coordinate count does not match group rank");
    if (g.finite())
        for (int i = 0; i < g.rank; ++i) coords[i] = mod_floor(coords[i], g.orders[i]);
    return GroupElement{g.id(), std::move(coords)};
}

GroupElement compose(const Group& g, const GroupElement& a, const GroupElement& b) {
    check_same_group(g, a);
    check_same_group(g, b);
    std::vector<int64_t> c(g.rank);
    for (int i = 0; i < g.rank; ++i) c[i] = a.v[i] + b.v[i];
    return element(g, std::move(c));
}

GroupElement invert(const Group& g, const GroupElement& a) {
    check_same_group(g, a);
    std::vector<int64_t> c(g.rank);
    for (int i = 0; i < g.rank; ++i) c[i] = -a.v[i];
    return element(g, std::move(c));
}

bool is_identity(const GroupElement& a) {
    return std::all_of(a.v.begin(), a.v.end(), [](int64_t x) { return x == 0; });
}

std::string to_string(const GroupElement& a) {
    if (a.v.size() == 1) return std::to_string(a.v[0]);
    std::string s = "(";
    for (size_t i = 0; i < a.v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a.v[i]);
    }
    return s + ")";
}

int64_t norm2(const std::vector<int64_t>& v) {
    __int128 s = 0;
    for (int64_t x : v) s += static_cast<__int128>(x) * x;
    if (s > INT64_MAX) throw std::overflow_error("norm2 overflow");
    return int64_t(s);
}

bool norm_lex_less(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
    int64_t na = norm2(a), nb = norm2(b);
    if (na != nb) return na < nb;
    return a < b;
}

Enumeration::Enumeration(Group g) : group_(std::move(g)) {}

std::optional<uint64_t> Enumeration::size() const {
    if (group_.finite()) return group_.order();
    return std::nullopt;
}

GroupElement Enumeration::at(uint64_t n) const {
    if (group_.finite()) {
        uint64_t total = group_.order();
        if (n >= total) throw std::out_of_range("enumeration index " + std::to_string(n) +
                                                " out of range for " + group_.name());
        // mixed radix, last factor fastest; n = 0 is the identity
        std::vector<int64_t> c(group_.rank);
        for (int i = group_.rank - 1; i >= 0; --i) {
            c[i] = int64_t(n % uint64_t(group_.orders[i]));
            n /= uint64_t(group_.orders[i]);
        }
        return GroupElement{group_.id(), std::move(c)};
    }
    extend_to_count(n + 1);
    return GroupElement{group_.id(), sorted_[n]};
}

uint64_t Enumeration::index_of(const GroupElement& a) const {
    if (a.gid != group_.id() || a.v.size() != size_t(group_.rank))
        throw std::invalid_argument("element does not belong to enumerated group");
    if (group_.finite()) {
        uint64_t n = 0;
        for (int i = 0; i < group_.rank; ++i) {
            int64_t c = a.v[i];
            if (c < 0 || c >= group_.orders[i]) throw std::invalid_argument("coordinate out of range");
            n = n * uint64_t(group_.orders[i]) + uint64_t(c);
        }
        return n;
    }
    extend_to_norm2(norm2(a.v));
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), a.v, norm_lex_less);
    if (it == sorted_.end() || *it != a.v) throw std::logic_error("enumeration bijection violated");
    return uint64_t(it - sorted_.begin());
}

void Enumeration::extend_to_norm2(int64_t m2) const {
    if (covered_norm2_ >= m2) return;
    int64_t r = int64_t(std::sqrt(double(m2))) + 2;
    // regenerate the full ball; extensions grow geometrically so this stays cheap
    std::vector<std::vector<int64_t>> pts;
    std::vector<int64_t> cur(group_.rank, -r);
    while (true) {
        if (norm2(cur) <= m2) pts.push_back(cur);
        int i = group_.rank - 1;
        while (i >= 0 && cur[i] == r) { cur[i] = -r; --i; }
        if (i < 0) break;
        ++cur[i];
    }
    std::sort(pts.begin(), pts.end(), norm_lex_less);
    sorted_ = std::move(pts);
    covered_norm2_ = m2;
}

void Enumeration::extend_to_count(uint64_t n) const {
    while (sorted_.size() < n) {
        int64_t next = covered_norm2_ < 4 ? 4 : covered_norm2_ * 4;
        extend_to_norm2(next);
    }
}

} // namespace kaclab
