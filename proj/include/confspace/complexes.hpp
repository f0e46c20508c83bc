#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "confspace/abelian_group.hpp"
#include "confspace/chainalg.hpp"
#include "confspace/combinat.hpp"
#include "confspace/exactla.hpp"
#include "confspace/sparse_matrix.hpp"

namespace confspace {

enum class ComplexKind { plane, plane_even, sphere };

/// A basis cell. For the sphere complex, block 0 is the A_n^r summand and
/// block 1 the A_{n-1}^{r-2} summand; the plane complexes only use block 0.
struct Cell {
    int block = 0;
    Composition composition;

    bool operator==(const Cell&) const = default;
    std::string str() const { return (block ? "b" : "") + composition.str(); }
};

/// Finite cochain complex with cells in a fixed canonical order. Bases and
/// differentials are built lazily, once per degree, and are safe to request
/// from several threads. Copies share the same lazily built state.
class GradedComplex {
public:
    ComplexKind kind() const { return state_->kind; }
    int n() const { return state_->n; }
    int max_degree() const { return state_->max_degree; }

    std::string label() const {
        switch (kind()) {
            case ComplexKind::plane: return "plane(" + std::to_string(n()) + ")";
            case ComplexKind::plane_even: return "planeEven(" + std::to_string(n()) + ")";
            case ComplexKind::sphere: return "sphere(" + std::to_string(n()) + ")";
        }
        return {};
    }

    /// Ordered basis of the degree-r cochains; empty outside 0..max_degree.
    const std::vector<Cell>& basis(int r) const {
        static const std::vector<Cell> empty;
        if (r < 0 || r > max_degree()) return empty;
        auto& slot = state_->degrees[r];
        std::call_once(slot.basis_once, [&] { slot.basis = build_basis(r); });
        return slot.basis;
    }

    int dim(int r) const { return static_cast<int>(basis(r).size()); }

    std::vector<int> dims() const {
        std::vector<int> d;
        for (int r = 0; r <= max_degree(); ++r) d.push_back(dim(r));
        return d;
    }

    /// Differential out of degree r as a dim(r+1) x dim(r) matrix acting on
    /// column vectors. Defined for every integer r (zero outside the range).
    /// The first request for degree r also checks d_r d_{r-1} = 0.
    const SparseIntMatrix& differential(int r) const {
        if (r < 0 || r > max_degree()) {
            std::lock_guard lock(state_->edge_mutex);
            auto key = r;
            auto it = state_->edge_matrices.find(key);
            if (it == state_->edge_matrices.end())
                it = state_->edge_matrices.emplace(key, SparseIntMatrix(dim(r + 1), dim(r))).first;
            return it->second;
        }
        auto& slot = state_->degrees[r];
        std::call_once(slot.matrix_once, [&] {
            slot.matrix = build_differential(r);
            const SparseIntMatrix& prev = differential(r - 1);
            if (!slot.matrix.multiply(prev).is_zero())
                throw std::logic_error(label() + ": composite of differentials at degree " + std::to_string(r) +
                                       " is nonzero");
        });
        return slot.matrix;
    }

    int index_of(int r, const Cell& cell) const {
        const auto& b = basis(r);
        auto it = std::find(b.begin(), b.end(), cell);
        return it == b.end() ? -1 : static_cast<int>(it - b.begin());
    }

    friend GradedComplex build_plane(int n);
    friend GradedComplex build_plane_even(int m);
    friend GradedComplex build_sphere(int n);

private:
    struct Degree {
        std::once_flag basis_once;
        std::vector<Cell> basis;
        std::once_flag matrix_once;
        SparseIntMatrix matrix;
    };

    struct State {
        ComplexKind kind;
        int n;
        int max_degree;
        std::vector<Degree> degrees;
        std::mutex edge_mutex;
        std::map<int, SparseIntMatrix> edge_matrices;

        State(ComplexKind k, int n_, int top)
            : kind(k), n(n_), max_degree(top), degrees(static_cast<std::size_t>(top + 1)) {}
    };

    GradedComplex(ComplexKind k, int n, int top) : state_(std::make_shared<State>(k, n, top)) {}

    // A_size^r cells of the plane complex, or the all-even ones.
    static std::vector<Composition> plane_cells(int size, int r, bool even_only) {
        int q = size - r;
        if (size < 0 || r < 0 || q < 0) return {};
        return even_only ? even_compositions(size, q) : compositions(size, q);
    }

    std::vector<Cell> build_basis(int r) const {
        std::vector<Cell> out;
        auto append = [&](int block, std::vector<Composition> cs) {
            for (auto& c : cs) out.push_back({block, std::move(c)});
        };
        switch (kind()) {
            case ComplexKind::plane: append(0, plane_cells(n(), r, false)); break;
            case ComplexKind::plane_even: append(0, plane_cells(n(), r, true)); break;
            case ComplexKind::sphere:
                append(0, plane_cells(n(), r, false));
                append(1, plane_cells(n() - 1, r - 2, false));
                break;
        }
        return out;
    }

    SparseIntMatrix build_differential(int r) const {
        const auto& src = basis(r);
        const auto& dst = basis(r + 1);
        std::map<Cell, int, CellLess> index;
        for (std::size_t i = 0; i < dst.size(); ++i) index.emplace(dst[i], static_cast<int>(i));
        std::vector<SparseIntMatrix::Entry> t;
        auto emit = [&](int col, int block, const Chain& image, int sign) {
            for (const auto& [comp, v] : image.terms()) {
                auto it = index.find(Cell{block, comp});
                if (it == index.end())
                    throw std::logic_error(label() + ": image cell " + comp.str() + " missing from basis");
                t.push_back({it->second, col, sign * v});
            }
        };
        // (a, b) -> (delta a, delta b + (-1)^{n-r} D a)
        const int d_sign = minus_one_pow(n() - r);
        for (std::size_t j = 0; j < src.size(); ++j) {
            const Cell& cell = src[j];
            Chain c = Chain::of(cell.composition);
            int col = static_cast<int>(j);
            emit(col, cell.block, delta(c), 1);
            if (kind() == ComplexKind::sphere && cell.block == 0 && n() >= 1) emit(col, 1, op_d(c), d_sign);
        }
        return SparseIntMatrix::from_triplets(static_cast<int>(dst.size()), static_cast<int>(src.size()), std::move(t));
    }

    struct CellLess {
        bool operator()(const Cell& a, const Cell& b) const {
            if (a.block != b.block) return a.block < b.block;
            return a.composition < b.composition;
        }
    };

    std::shared_ptr<State> state_;
};

/// Fuks-Vainshtein complex A_n: degree r spanned by compositions of n into
/// n - r parts.
inline GradedComplex build_plane(int n) {
    if (n < 0) throw std::invalid_argument("plane complex needs n >= 0");
    return GradedComplex(ComplexKind::plane, n, std::max(n - 1, 0));
}

/// Subcomplex A_{m,0} of compositions with only even parts.
inline GradedComplex build_plane_even(int m) {
    if (m < 0 || m % 2 != 0) throw std::invalid_argument("even subcomplex needs an even m >= 0");
    return GradedComplex(ComplexKind::plane_even, m, std::max(m - 1, 0));
}

/// Sphere complex B_n = A_n + A_{n-1}[-2], the mapping cone of D.
inline GradedComplex build_sphere(int n) {
    if (n < 1) throw std::invalid_argument("sphere complex needs n >= 1");
    return GradedComplex(ComplexKind::sphere, n, std::max(n, 2));
}

/// Cohomology groups H^0..H^top of a complex. Over F_p a group is reported
/// as (Z/p)^dim. Degrees are processed concurrently.
inline std::vector<AbelianGroup> complex_cohomology(const GradedComplex& cx, Coefficients k) {
    const int top = cx.max_degree();
    // Invariants of every differential d_{-1} .. d_top, computed once each.
    struct Inv {
        int rank = 0;
        std::vector<BigInt> divisors;
    };
    std::vector<std::future<Inv>> jobs;
    for (int r = -1; r <= top; ++r)
        jobs.push_back(std::async(std::launch::async, [&cx, k, r] {
            const SparseIntMatrix& d = cx.differential(r);
            Inv inv;
            if (k.integral()) {
                SnfResult s = smith_normal_form(d);
                inv.rank = s.rank;
                inv.divisors = std::move(s.divisors);
            } else {
                inv.rank = rank_mod_p(d, k.prime);
            }
            return inv;
        }));
    std::vector<Inv> inv;
    for (auto& j : jobs) inv.push_back(j.get());
    std::vector<AbelianGroup> out;
    for (int r = 0; r <= top; ++r) {
        const Inv& in = inv[static_cast<std::size_t>(r)];
        const Inv& outgoing = inv[static_cast<std::size_t>(r) + 1];
        int free = cx.dim(r) - outgoing.rank - in.rank;
        if (free < 0) throw std::logic_error("negative Betti number; ranks are inconsistent");
        out.push_back(k.integral() ? AbelianGroup::from_cyclic_orders(free, in.divisors)
                                   : AbelianGroup::elementary(k.prime, free));
    }
    return out;
}

/// H^r alone; only the differentials adjacent to degree r are built.
inline AbelianGroup complex_cohomology_at(const GradedComplex& cx, int r, Coefficients k) {
    return cohomology_at(cx.differential(r - 1), cx.differential(r), k);
}

/// One summand of the splitting H^*(A_n) = sum over even m <= n of H^*(A_{m,0}).
struct EvenPiece {
    int m = 0;
    std::vector<AbelianGroup> groups;  // indexed by degree
};

inline std::vector<EvenPiece> decompose_plane(int n, Coefficients k) {
    if (n < 0) throw std::invalid_argument("plane complex needs n >= 0");
    std::vector<EvenPiece> pieces;
    for (int m = 0; m <= n; m += 2) pieces.push_back({m, complex_cohomology(build_plane_even(m), k)});
    return pieces;
}

/// Degree-wise direct sum of the pieces, padded to degrees 0..max(n-1, 0).
inline std::vector<AbelianGroup> sum_pieces(int n, const std::vector<EvenPiece>& pieces) {
    std::vector<AbelianGroup> total(static_cast<std::size_t>(std::max(n - 1, 0) + 1));
    for (const auto& piece : pieces)
        for (std::size_t r = 0; r < piece.groups.size(); ++r) {
            if (r >= total.size()) {
                if (!piece.groups[r].is_trivial()) throw std::logic_error("even piece beyond the degree range");
                continue;
            }
            total[r] = total[r] + piece.groups[r];
        }
    return total;
}

}  // namespace confspace
