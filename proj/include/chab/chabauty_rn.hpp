#pragma once

#include <array>
#include <string>
#include <vector>

#include "chab/common.hpp"

namespace chab {

inline constexpr int kMaxAmbientDim = 4;

using Vec4 = std::array<double, 4>;

// A closed subgroup of R^n in the canonical (linear subspace) + (lattice)
// form: the stored subspace basis is orthonormal, lattice vectors are
// projected off the subspace and reduced. Every closed subgroup of R^n is of
// this shape, and the construction keeps it closed.
struct ClosedSubgroupRn {
    int dim = 1;
    std::vector<Vec4> subspace;  // orthonormal basis of the connected component
    std::vector<Vec4> lattice;   // reduced basis, orthogonal to the subspace
    std::string canonical;       // canonical form key (exact for lattice rank <= 2)
};

// Validates ranks/independence (tolerance 1e-9) and canonicalizes.
ClosedSubgroupRn make_subgroup(int dim, const std::vector<std::vector<double>>& subspace,
                               const std::vector<std::vector<double>>& lattice);

// Exact equality of the represented subgroups: subspaces by row space,
// lattices by mutual integrality of coordinates.
bool same_subgroup(const ClosedSubgroupRn& a, const ClosedSubgroupRn& b);

// A finite subset of the subgroup, sorted by Euclidean norm.
struct PointSet {
    int dim = 1;
    std::vector<Vec4> pts;
    std::vector<double> norm;
};

// H intersected with the closed ball B_r(0): exact lattice points, plus a
// net of the subspace directions with covering radius <= net_step when the
// subspace part is nontrivial. Always contains 0.
PointSet enumerate_in_ball(const ClosedSubgroupRn& h, double r, double net_step,
                           size_t budget = 1'000'000);

double hausdorff_distance(const PointSet& a, const PointSet& b);

struct QuadSpec {
    double r_cut = 12.0;
    double step = 1.0 / 64.0;
    double net_step = 1.0 / 64.0;
    size_t budget = 1'000'000;
};

struct RhoResult {
    double value = 0.0;
    double error_bound = 0.0;
};

// rho(H1,H2) = int_0^inf Hd(H1 cap B_r, H2 cap B_r) e^-r dr by composite
// midpoint quadrature on [0, r_cut]. The reported error bound is rigorous:
// per-cell oscillation brackets (jump-aware), the net covering error, and
// the tail (r_cut+1)e^-r_cut from Hd <= r.
RhoResult chabauty_distance(const ClosedSubgroupRn& h1, const ClosedSubgroupRn& h2,
                            const QuadSpec& quad);

}  // namespace chab
