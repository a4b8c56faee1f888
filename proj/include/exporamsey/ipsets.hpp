#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "exporamsey/config.hpp"
#include "exporamsey/set_spec.hpp"

namespace exporamsey {

using Value = std::uint64_t;

/// Largest window bound accepted by the windowed routines.
inline constexpr Value kWindowMax = Value{1} << 62;

/// A finite subset of [lo, hi]. members are sorted and unique.
struct WindowSet {
    Value lo = 0;
    Value hi = 0;
    std::vector<Value> members;

    /// Validates bounds and membership; sorts and dedupes `members`.
    static WindowSet make(Value lo, Value hi, std::vector<Value> members);
    /// Every n in [lo, hi] accepted by `spec`.
    static WindowSet from_spec(const SetSpec& spec, Value lo, Value hi, const Caps& caps = {});

    bool contains(Value v) const;
    friend bool operator==(const WindowSet&, const WindowSet&) = default;
};

struct SetTransform {
    enum class Kind { Shift, Divide, Log, Root };
    Kind kind;
    std::int64_t n;  // only Shift accepts negative n (the inverse shift)

    static SetTransform shift(std::int64_t n) { return {Kind::Shift, n}; }
    static SetTransform divide(std::int64_t n) { return {Kind::Divide, n}; }
    static SetTransform log(std::int64_t n) { return {Kind::Log, n}; }
    static SetTransform root(std::int64_t n) { return {Kind::Root, n}; }
};

/// Preimage of A under m -> m + n, m * n, n^m or m^n, restricted to the
/// image of A's window:
///   shift  [max(lo - n, 0), hi - n]
///   divide [ceil(lo / n), floor(hi / n)]
///   log    [ceil(log_n lo), floor(log_n hi)]
///   root   [ceil(lo^(1/n)), floor(hi^(1/n))]
/// When that range is empty the result is the single point at its (clamped)
/// upper end; that point maps outside [lo, hi] and so has no members.
WindowSet transform(const WindowSet& a, SetTransform op);

enum class SearchStatus { Found, None, Inconclusive };

struct SeedSearch {
    SearchStatus status = SearchStatus::None;
    std::vector<Value> seed;  // set iff Found
    std::uint64_t nodes = 0;
};

/// Lexicographically least strictly increasing X, |X| = m, with FS(X) inside A.
SeedSearch find_fs_seed(const WindowSet& a, std::size_t m, std::uint64_t budget = 10'000'000);

/// Multiplicative analogue of find_fs_seed (FP(X) inside A).
SeedSearch find_fp_seed(const WindowSet& a, std::size_t m, std::uint64_t budget = 10'000'000);

enum class IpKind { Additive, Multiplicative };
enum class Verdict { Holds, Fails, Inconclusive };

struct IpStarVerdict {
    Verdict verdict = Verdict::Holds;
    std::vector<Value> witness;  // set iff Fails: FS/FP(witness) avoids A
};

/// Windowed size-m shadow of "A is IP*": fails when the complement of A in
/// [lo, hi] contains FS(X) (resp. FP(X)) for some |X| = m.
IpStarVerdict is_ip_star_window(const SetSpec& a, IpKind kind, std::size_t m, Value lo, Value hi,
                                const Caps& caps = {}, std::uint64_t budget = 10'000'000);

/// Every (a, h), h >= 2, with a, a*h, ..., a*h^(length-1) all in A; sorted.
std::vector<std::pair<Value, Value>> find_geometric_progressions(const WindowSet& a, std::size_t length);

/// Every h >= 2 with h, h^2, ..., h^length all in A; ascending.
std::vector<Value> find_power_progressions(const WindowSet& a, std::size_t length);

}  // namespace exporamsey
