#pragma once

// Binary voxel sets on a rational lattice. Cell i stands for the closed box
// anchor + h [i, i+1]^d. Occupancy is stored as bit rows along the last axis,
// padded to whole 64-bit words, rows in row-major order of the other axes.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <deque>
#include <exception>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "mksum/errors.hpp"
#include "mksum/rational.hpp"

namespace mksum {

inline constexpr std::size_t kDefaultCellCap = std::size_t{1} << 28;

struct GridFrame {
    Point anchor;
    Rational h = 1;
    std::vector<std::int64_t> extents;

    std::size_t dim() const { return extents.size(); }

    std::size_t cells() const {
        std::size_t n = 1;
        for (auto e : extents) n *= static_cast<std::size_t>(e);
        return n;
    }

    bool operator==(const GridFrame&) const = default;

    /// Smallest frame at spacing h, with anchor on the lattice h Z^d, whose box
    /// contains [lo, hi]. `margin` extra cells are added on every side.
    static GridFrame covering(const Point& lo, const Point& hi, const Rational& h, std::int64_t margin = 0) {
        if (!(h > 0)) throw InvalidArgument("grid spacing must be positive");
        GridFrame f;
        f.h = h;
        for (std::size_t j = 0; j < lo.size(); ++j) {
            BigInt a = floor_of(lo[j] / h) - margin;
            BigInt b = ceil_of(hi[j] / h) + margin;
            if (b <= a) b = a + 1;
            f.anchor.push_back(Rational(a) * h);
            f.extents.push_back(to_int64(b - a));
        }
        return f;
    }
};

inline void check_cell_cap(const std::vector<std::int64_t>& extents, std::size_t cap) {
    long double n = 1;
    for (auto e : extents) {
        if (e <= 0) throw InvalidArgument("grid extents must be positive");
        n *= static_cast<long double>(e);
    }
    if (n > static_cast<long double>(cap)) {
        std::size_t req = n > 1.8e19L ? SIZE_MAX : static_cast<std::size_t>(n);
        throw CellCapExceeded(req, cap);
    }
}

enum class GridMode { inner, outer, exact };

inline const char* to_string(GridMode m) {
    switch (m) {
        case GridMode::inner: return "inner";
        case GridMode::outer: return "outer";
        default: return "exact";
    }
}

struct VolumeBound {
    Rational lower = 0;
    Rational upper = 0;
};

class GridSet {
public:
    GridSet() = default;
    GridSet(GridFrame frame, GridMode mode, std::size_t cap = kDefaultCellCap)
        : frame_(std::move(frame)), mode_(mode) {
        if (frame_.extents.empty()) throw InvalidArgument("grid needs dimension >= 1");
        check_cell_cap(frame_.extents, cap);
        words_ = static_cast<std::size_t>((frame_.extents.back() + 63) / 64);
        rows_ = 1;
        for (std::size_t j = 0; j + 1 < frame_.dim(); ++j) rows_ *= static_cast<std::size_t>(frame_.extents[j]);
        bits_.assign(rows_ * words_, 0);
    }

    const GridFrame& frame() const { return frame_; }
    std::size_t dim() const { return frame_.dim(); }
    const std::vector<std::int64_t>& extents() const { return frame_.extents; }
    GridMode mode() const { return mode_; }
    void set_mode(GridMode m) { mode_ = m; }
    std::size_t rows() const { return rows_; }
    std::size_t words_per_row() const { return words_; }
    std::int64_t row_length() const { return frame_.extents.back(); }

    std::uint64_t* row(std::size_t r) { return bits_.data() + r * words_; }
    const std::uint64_t* row(std::size_t r) const { return bits_.data() + r * words_; }

    /// Row number of a prefix (indices along all but the last axis).
    std::size_t row_of(const std::int64_t* prefix) const {
        std::size_t r = 0;
        for (std::size_t j = 0; j + 1 < dim(); ++j) r = r * static_cast<std::size_t>(frame_.extents[j]) + static_cast<std::size_t>(prefix[j]);
        return r;
    }

    void prefix_of(std::size_t r, std::int64_t* prefix) const {
        for (std::size_t j = dim() - 1; j-- > 0;) {
            prefix[j] = static_cast<std::int64_t>(r % static_cast<std::size_t>(frame_.extents[j]));
            r /= static_cast<std::size_t>(frame_.extents[j]);
        }
    }

    bool in_range(const std::vector<std::int64_t>& idx) const {
        for (std::size_t j = 0; j < dim(); ++j)
            if (idx[j] < 0 || idx[j] >= frame_.extents[j]) return false;
        return true;
    }

    bool test(const std::vector<std::int64_t>& idx) const {
        if (!in_range(idx)) return false;
        auto z = static_cast<std::size_t>(idx.back());
        return (row(row_of(idx.data()))[z / 64] >> (z % 64)) & 1u;
    }

    void set(const std::vector<std::int64_t>& idx, bool value = true) {
        if (!in_range(idx)) throw InvalidArgument("cell index outside grid");
        auto z = static_cast<std::size_t>(idx.back());
        auto& w = row(row_of(idx.data()))[z / 64];
        if (value)
            w |= std::uint64_t{1} << (z % 64);
        else
            w &= ~(std::uint64_t{1} << (z % 64));
    }

    /// Sets cells lo..hi (inclusive) of row r; clamps to the row.
    void set_run(std::size_t r, std::int64_t lo, std::int64_t hi) {
        lo = std::max<std::int64_t>(lo, 0);
        hi = std::min<std::int64_t>(hi, row_length() - 1);
        if (lo > hi) return;
        std::uint64_t* w = row(r);
        auto a = static_cast<std::size_t>(lo), b = static_cast<std::size_t>(hi);
        std::size_t wa = a / 64, wb = b / 64;
        std::uint64_t ma = ~std::uint64_t{0} << (a % 64);
        std::uint64_t mb = ~std::uint64_t{0} >> (63 - b % 64);
        if (wa == wb) {
            w[wa] |= ma & mb;
            return;
        }
        w[wa] |= ma;
        for (std::size_t i = wa + 1; i < wb; ++i) w[i] = ~std::uint64_t{0};
        w[wb] |= mb;
    }

    bool row_empty(std::size_t r) const {
        const std::uint64_t* w = row(r);
        for (std::size_t i = 0; i < words_; ++i)
            if (w[i]) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    bool empty() const {
        for (auto w : bits_)
            if (w) return false;
        return true;
    }

    Rational cell_volume() const { return pow_int(frame_.h, static_cast<unsigned>(dim())); }
    Rational volume() const { return Rational(static_cast<long long>(count())) * cell_volume(); }

    /// Calls f(index) for every occupied cell in storage order.
    template <class F>
    void for_each(F&& f) const {
        std::vector<std::int64_t> idx(dim());
        for (std::size_t r = 0; r < rows_; ++r) {
            const std::uint64_t* w = row(r);
            bool any = false;
            for (std::size_t i = 0; i < words_ && !any; ++i) any = w[i] != 0;
            if (!any) continue;
            prefix_of(r, idx.data());
            for (std::size_t i = 0; i < words_; ++i) {
                std::uint64_t b = w[i];
                while (b) {
                    int t = std::countr_zero(b);
                    idx.back() = static_cast<std::int64_t>(i * 64 + static_cast<std::size_t>(t));
                    f(idx);
                    b &= b - 1;
                }
            }
        }
    }

    /// Cell center in world coordinates (floating point, for distances only).
    std::vector<double> center(const std::vector<std::int64_t>& idx) const {
        std::vector<double> c(dim());
        double h = to_double(frame_.h);
        for (std::size_t j = 0; j < dim(); ++j) c[j] = to_double(frame_.anchor[j]) + h * (static_cast<double>(idx[j]) + 0.5);
        return c;
    }

    const std::vector<std::uint64_t>& words() const { return bits_; }

    GridSet& operator|=(const GridSet& o) {
        require_same_frame(o);
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
        return *this;
    }
    GridSet& operator&=(const GridSet& o) {
        require_same_frame(o);
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
        return *this;
    }
    /// Removes the cells of o.
    GridSet& subtract(const GridSet& o) {
        require_same_frame(o);
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
        return *this;
    }

    bool same_cells(const GridSet& o) const { return frame_ == o.frame_ && bits_ == o.bits_; }

    /// True when every cell of this set is a cell of o.
    bool subset_of(const GridSet& o) const {
        require_same_frame(o);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] & ~o.bits_[i]) return false;
        return true;
    }

private:
    void require_same_frame(const GridSet& o) const {
        if (!(frame_ == o.frame_)) throw InvalidArgument("grid frames differ");
    }

    GridFrame frame_;
    GridMode mode_ = GridMode::exact;
    std::size_t rows_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

namespace detail {

// dst |= src << shift (bit i of src lands on bit i + shift of dst); dst has n_dst words.
inline void or_shifted(std::uint64_t* dst, std::size_t n_dst, const std::uint64_t* src, std::size_t n_src,
                       std::size_t shift) {
    const std::size_t ws = shift / 64, bs = shift % 64;
    for (std::size_t i = 0; i < n_src; ++i) {
        std::uint64_t v = src[i];
        if (!v) continue;
        std::size_t t = i + ws;
        if (t < n_dst) dst[t] |= v << bs;
        if (bs && t + 1 < n_dst) dst[t + 1] |= v >> (64 - bs);
    }
}

struct Run {
    std::size_t start;
    std::size_t length;
};

inline std::vector<Run> runs_of(const std::uint64_t* w, std::size_t words) {
    std::vector<Run> runs;
    const std::size_t n = words * 64;
    std::size_t i = 0;
    while (i < n) {
        std::size_t wi = i / 64;
        std::uint64_t b = w[wi] & (~std::uint64_t{0} << (i % 64));
        while (!b) {
            if (++wi == words) return runs;
            b = w[wi];
        }
        std::size_t s = wi * 64 + static_cast<std::size_t>(std::countr_zero(b));
        wi = s / 64;
        std::uint64_t z = ~w[wi] & (~std::uint64_t{0} << (s % 64));
        while (!z) {
            if (++wi == words) {
                runs.push_back({s, n - s});
                return runs;
            }
            z = ~w[wi];
        }
        std::size_t e = wi * 64 + static_cast<std::size_t>(std::countr_zero(z));
        runs.push_back({s, e - s});
        i = e;
    }
    return runs;
}

// dst |= (src dilated by {0..len-1}) << start, with scratch space of n_dst words.
inline void or_run_dilation(std::uint64_t* dst, std::size_t n_dst, const std::uint64_t* src, std::size_t n_src,
                            const std::vector<Run>& runs, std::vector<std::uint64_t>& scratch,
                            std::vector<std::uint64_t>& tmp) {
    scratch.assign(n_dst, 0);
    tmp.assign(n_dst, 0);
    for (const auto& run : runs) {
        std::fill(scratch.begin(), scratch.end(), 0);
        std::copy(src, src + std::min(n_src, n_dst), scratch.begin());
        std::size_t covered = 1;
        while (covered < run.length) {
            std::size_t step = std::min(covered, run.length - covered);
            std::copy(scratch.begin(), scratch.end(), tmp.begin());
            or_shifted(scratch.data(), n_dst, tmp.data(), n_dst, step);
            covered += step;
        }
        or_shifted(dst, n_dst, scratch.data(), n_dst, run.start);
    }
}

inline unsigned resolve_workers(unsigned workers) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    return workers;
}

template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& f) {
    workers = resolve_workers(workers);
    if (workers <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex m;
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += workers) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace detail

/// Index sumset {i + j} with anchors added. Both inputs need the same spacing.
inline GridSet dilate(const GridSet& a, const GridSet& b, std::size_t cap = kDefaultCellCap, unsigned workers = 1) {
    if (a.dim() != b.dim()) throw InvalidArgument("dilate: dimension mismatch");
    if (a.frame().h != b.frame().h) throw InvalidArgument("dilate: spacing mismatch");
    const std::size_t d = a.dim();
    GridFrame f;
    f.h = a.frame().h;
    for (std::size_t j = 0; j < d; ++j) {
        f.anchor.push_back(a.frame().anchor[j] + b.frame().anchor[j]);
        f.extents.push_back(a.extents()[j] + b.extents()[j] - 1);
    }
    GridMode mode = a.mode() == b.mode() ? a.mode()
                    : a.mode() == GridMode::exact ? b.mode()
                    : b.mode() == GridMode::exact ? a.mode()
                                                  : GridMode::exact;
    if ((a.mode() == GridMode::inner && b.mode() == GridMode::outer) ||
        (a.mode() == GridMode::outer && b.mode() == GridMode::inner))
        throw InvalidArgument("dilate: cannot combine inner and outer sets");
    GridSet out(f, mode, cap);

    struct RowRuns {
        std::vector<std::int64_t> prefix;
        std::vector<detail::Run> runs;
    };
    std::vector<RowRuns> brows;
    for (std::size_t r = 0; r < b.rows(); ++r) {
        if (b.row_empty(r)) continue;
        RowRuns rr;
        rr.prefix.resize(d);
        b.prefix_of(r, rr.prefix.data());
        rr.runs = detail::runs_of(b.row(r), b.words_per_row());
        brows.push_back(std::move(rr));
    }
    if (brows.empty() || a.empty()) return out;

    detail::parallel_for(out.rows(), workers, [&](std::size_t orow) {
        std::vector<std::int64_t> po(d), pa(d);
        out.prefix_of(orow, po.data());
        std::vector<std::uint64_t> scratch, tmp;
        for (const auto& br : brows) {
            bool ok = true;
            for (std::size_t j = 0; j + 1 < d; ++j) {
                pa[j] = po[j] - br.prefix[j];
                if (pa[j] < 0 || pa[j] >= a.extents()[j]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            std::size_t ar = a.row_of(pa.data());
            if (a.row_empty(ar)) continue;
            detail::or_run_dilation(out.row(orow), out.words_per_row(), a.row(ar), a.words_per_row(), br.runs,
                                    scratch, tmp);
        }
    });
    return out;
}

/// k-fold index sumset by binary doubling.
inline GridSet self_sum(const GridSet& a, std::int64_t k, std::size_t cap = kDefaultCellCap, unsigned workers = 1) {
    if (k < 1) throw InvalidArgument("self_sum requires k >= 1");
    std::optional<GridSet> result;
    GridSet base = a;
    while (k > 0) {
        if (k & 1) result = result ? dilate(*result, base, cap, workers) : base;
        k >>= 1;
        if (k > 0) base = dilate(base, base, cap, workers);
    }
    return *result;
}

/// All cells of {0..n-1}^d with anchor 0 at spacing h.
inline GridSet full_block(std::size_t d, std::int64_t n, const Rational& h) {
    GridFrame f{zero_point(d), h, std::vector<std::int64_t>(d, n)};
    GridSet g(f, GridMode::exact);
    for (std::size_t r = 0; r < g.rows(); ++r) g.set_run(r, 0, n - 1);
    return g;
}

/// Exact cell set of (union of A's cells) + (union of B's cells): the index
/// sumset thickened by {0,1}^d.
inline GridSet minkowski_cells(const GridSet& a, const GridSet& b, std::size_t cap = kDefaultCellCap,
                               unsigned workers = 1) {
    GridSet s = dilate(a, b, cap, workers);
    return dilate(s, full_block(a.dim(), 2, a.frame().h), cap, workers);
}

/// Exact cell set of the k-fold sum of A's cell union.
inline GridSet kfold_cells(const GridSet& a, std::int64_t k, std::size_t cap = kDefaultCellCap, unsigned workers = 1) {
    GridSet s = self_sum(a, k, cap, workers);
    if (k == 1) return s;
    return dilate(s, full_block(a.dim(), k, a.frame().h), cap, workers);
}

/// Re-frames a set onto a larger frame with the same spacing and a lattice-compatible anchor.
inline GridSet reframe(const GridSet& a, const GridFrame& target, std::size_t cap = kDefaultCellCap) {
    if (target.h != a.frame().h || target.dim() != a.dim()) throw InvalidArgument("reframe: incompatible frame");
    std::vector<std::int64_t> offset(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) {
        Rational o = (a.frame().anchor[j] - target.anchor[j]) / target.h;
        if (denominator_of(o) != 1) throw InvalidArgument("reframe: anchors are not lattice-aligned");
        offset[j] = to_int64(numerator_of(o));
    }
    GridSet out(target, a.mode(), cap);
    std::vector<std::int64_t> t(a.dim());
    a.for_each([&](const std::vector<std::int64_t>& idx) {
        for (std::size_t j = 0; j < idx.size(); ++j) t[j] = idx[j] + offset[j];
        if (!out.in_range(t)) throw InvalidArgument("reframe: target frame does not contain the set");
        out.set(t);
    });
    return out;
}

/// Occupied cells with at least one unoccupied face neighbour (outside the extents counts as unoccupied).
inline GridSet boundary_cells(const GridSet& a) {
    GridSet out(a.frame(), GridMode::exact);
    const std::size_t d = a.dim(), W = a.words_per_row();
    std::vector<std::int64_t> p(d), q(d);
    std::vector<std::uint64_t> interior(W);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (a.row_empty(r)) continue;
        const std::uint64_t* w = a.row(r);
        a.prefix_of(r, p.data());
        // neighbours along the last axis
        for (std::size_t i = 0; i < W; ++i) {
            std::uint64_t left = (w[i] << 1) | (i > 0 ? w[i - 1] >> 63 : 0);
            std::uint64_t right = (w[i] >> 1) | (i + 1 < W ? w[i + 1] << 63 : 0);
            interior[i] = w[i] & left & right;
        }
        for (std::size_t j = 0; j + 1 < d; ++j) {
            for (int s : {-1, 1}) {
                q = p;
                q[j] += s;
                if (q[j] < 0 || q[j] >= a.extents()[j]) {
                    std::fill(interior.begin(), interior.end(), 0);
                    continue;
                }
                const std::uint64_t* nbr = a.row(a.row_of(q.data()));
                for (std::size_t i = 0; i < W; ++i) interior[i] &= nbr[i];
            }
        }
        std::uint64_t* o = out.row(r);
        for (std::size_t i = 0; i < W; ++i) o[i] = w[i] & ~interior[i];
    }
    return out;
}

namespace detail {

inline std::vector<std::vector<std::int64_t>> neighbour_offsets(std::size_t d, bool full) {
    std::vector<std::vector<std::int64_t>> offs;
    if (!full) {
        for (std::size_t j = 0; j < d; ++j)
            for (int s : {-1, 1}) {
                std::vector<std::int64_t> o(d, 0);
                o[j] = s;
                offs.push_back(o);
            }
        return offs;
    }
    std::vector<std::int64_t> o(d, -1);
    while (true) {
        if (std::any_of(o.begin(), o.end(), [](std::int64_t v) { return v != 0; })) offs.push_back(o);
        std::size_t j = 0;
        while (j < d && o[j] == 1) o[j++] = -1;
        if (j == d) break;
        ++o[j];
    }
    return offs;
}

inline std::size_t flat_index(const std::vector<std::int64_t>& idx, const std::vector<std::int64_t>& ext) {
    std::size_t f = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) f = f * static_cast<std::size_t>(ext[j]) + static_cast<std::size_t>(idx[j]);
    return f;
}

inline void unflatten(std::size_t f, const std::vector<std::int64_t>& ext, std::vector<std::int64_t>& idx) {
    for (std::size_t j = ext.size(); j-- > 0;) {
        idx[j] = static_cast<std::int64_t>(f % static_cast<std::size_t>(ext[j]));
        f /= static_cast<std::size_t>(ext[j]);
    }
}

}  // namespace detail

struct Components {
    std::size_t count = 0;
    /// Per flat cell index: component number + 1, or 0 for unoccupied cells.
    std::vector<std::uint32_t> labels;
};

/// Connected components of the occupied cells; face adjacency, or all 3^d - 1
/// neighbours when `full` is set.
inline Components connected_components(const GridSet& a, bool full) {
    const auto& ext = a.extents();
    Components c;
    c.labels.assign(a.frame().cells(), 0);
    auto offs = detail::neighbour_offsets(a.dim(), full);
    std::vector<std::int64_t> cur(a.dim()), nb(a.dim());
    a.for_each([&](const std::vector<std::int64_t>& idx) {
        std::size_t f0 = detail::flat_index(idx, ext);
        if (c.labels[f0]) return;
        ++c.count;
        auto label = static_cast<std::uint32_t>(c.count);
        std::deque<std::size_t> queue{f0};
        c.labels[f0] = label;
        while (!queue.empty()) {
            std::size_t f = queue.front();
            queue.pop_front();
            detail::unflatten(f, ext, cur);
            for (const auto& o : offs) {
                for (std::size_t j = 0; j < cur.size(); ++j) nb[j] = cur[j] + o[j];
                if (!a.test(nb)) continue;
                std::size_t g = detail::flat_index(nb, ext);
                if (c.labels[g]) continue;
                c.labels[g] = label;
                queue.push_back(g);
            }
        }
    });
    return c;
}

/// Occupied cells face-adjacent to the unbounded component of the complement
/// (cells on the frame border count as adjacent).
inline GridSet exterior_boundary(const GridSet& a) {
    const auto& ext = a.extents();
    const std::size_t d = a.dim();
    std::vector<char> outside(a.frame().cells(), 0);
    std::deque<std::size_t> queue;
    std::vector<std::int64_t> idx(d), nb(d);
    for (std::size_t f = 0; f < outside.size(); ++f) {
        detail::unflatten(f, ext, idx);
        bool border = false;
        for (std::size_t j = 0; j < d; ++j)
            if (idx[j] == 0 || idx[j] == ext[j] - 1) border = true;
        if (border && !a.test(idx)) {
            outside[f] = 1;
            queue.push_back(f);
        }
    }
    auto offs = detail::neighbour_offsets(d, false);
    while (!queue.empty()) {
        std::size_t f = queue.front();
        queue.pop_front();
        detail::unflatten(f, ext, idx);
        for (const auto& o : offs) {
            for (std::size_t j = 0; j < d; ++j) nb[j] = idx[j] + o[j];
            if (!a.in_range(nb) || a.test(nb)) continue;
            std::size_t g = detail::flat_index(nb, ext);
            if (outside[g]) continue;
            outside[g] = 1;
            queue.push_back(g);
        }
    }
    GridSet out(a.frame(), GridMode::exact);
    a.for_each([&](const std::vector<std::int64_t>& cell) {
        for (const auto& o : offs) {
            for (std::size_t j = 0; j < d; ++j) nb[j] = cell[j] + o[j];
            if (!a.in_range(nb) || outside[detail::flat_index(nb, ext)]) {
                out.set(cell);
                return;
            }
        }
    });
    return out;
}

// Bit-stream layout (all integers little-endian):
//   "MKSG"            4 bytes magic
//   u32 version = 1
//   u32 d
//   u32 mode          0 inner, 1 outer, 2 exact
//   i64 extents[d]
//   i64 h_num, i64 h_den
//   i64 anchor_num[d], i64 anchor_den[d] interleaved per axis
//   cells packed LSB-first in row-major order (last axis fastest), no row padding

namespace detail {

inline void put_le(std::ostream& os, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint64_t get_le(std::istream& is, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        int c = is.get();
        if (c == EOF) throw InvalidArgument("grid stream truncated");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

inline void put_rational(std::ostream& os, const Rational& r) {
    put_le(os, static_cast<std::uint64_t>(to_int64(numerator_of(r))), 8);
    put_le(os, static_cast<std::uint64_t>(to_int64(denominator_of(r))), 8);
}

inline Rational get_rational(std::istream& is) {
    auto n = static_cast<std::int64_t>(get_le(is, 8));
    auto d = static_cast<std::int64_t>(get_le(is, 8));
    return make_rational(n, d);
}

}  // namespace detail

inline void write_grid(std::ostream& os, const GridSet& g) {
    os.write("MKSG", 4);
    detail::put_le(os, 1, 4);
    detail::put_le(os, g.dim(), 4);
    detail::put_le(os, static_cast<std::uint64_t>(g.mode()), 4);
    for (auto e : g.extents()) detail::put_le(os, static_cast<std::uint64_t>(e), 8);
    detail::put_rational(os, g.frame().h);
    for (const auto& a : g.frame().anchor) detail::put_rational(os, a);
    std::uint8_t byte = 0;
    int nbits = 0;
    const std::int64_t L = g.row_length();
    for (std::size_t r = 0; r < g.rows(); ++r) {
        const std::uint64_t* w = g.row(r);
        for (std::int64_t z = 0; z < L; ++z) {
            if ((w[z / 64] >> (z % 64)) & 1u) byte |= static_cast<std::uint8_t>(1u << nbits);
            if (++nbits == 8) {
                os.put(static_cast<char>(byte));
                byte = 0;
                nbits = 0;
            }
        }
    }
    if (nbits) os.put(static_cast<char>(byte));
}

inline GridSet read_grid(std::istream& is, std::size_t cap = kDefaultCellCap) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "MKSG", 4) != 0) throw InvalidArgument("not a grid stream");
    if (detail::get_le(is, 4) != 1) throw InvalidArgument("unsupported grid stream version");
    auto d = static_cast<std::size_t>(detail::get_le(is, 4));
    auto mode = static_cast<GridMode>(detail::get_le(is, 4));
    if (d == 0 || d > 16) throw InvalidArgument("grid stream dimension out of range");
    GridFrame f;
    for (std::size_t j = 0; j < d; ++j) f.extents.push_back(static_cast<std::int64_t>(detail::get_le(is, 8)));
    f.h = detail::get_rational(is);
    for (std::size_t j = 0; j < d; ++j) f.anchor.push_back(detail::get_rational(is));
    GridSet g(f, mode, cap);
    const std::int64_t L = g.row_length();
    int nbits = 8;
    std::uint8_t byte = 0;
    for (std::size_t r = 0; r < g.rows(); ++r) {
        std::uint64_t* w = g.row(r);
        for (std::int64_t z = 0; z < L; ++z) {
            if (nbits == 8) {
                int c = is.get();
                if (c == EOF) throw InvalidArgument("grid stream truncated");
                byte = static_cast<std::uint8_t>(c);
                nbits = 0;
            }
            if ((byte >> nbits++) & 1u) w[z / 64] |= std::uint64_t{1} << (z % 64);
        }
    }
    return g;
}

}  // namespace mksum
