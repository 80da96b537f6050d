#include "chab/chabauty_rn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace chab {

namespace {

constexpr double kTol = 1e-9;

double dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
double norm2(const Vec4& a) { return dot(a, a); }
double vnorm(const Vec4& a) { return std::sqrt(norm2(a)); }
Vec4 sub(Vec4 a, const Vec4& b) {
    for (int i = 0; i < 4; ++i) a[i] -= b[i];
    return a;
}
Vec4 scale(Vec4 a, double t) {
    for (int i = 0; i < 4; ++i) a[i] *= t;
    return a;
}
Vec4 axpy(Vec4 a, double t, const Vec4& b) {
    for (int i = 0; i < 4; ++i) a[i] += t * b[i];
    return a;
}

long long quantize(double x) {
    long long q = llround(x * 1e9);
    return q == 0 ? 0 : q;  // avoid -0
}

// reduced row echelon form of the row space, canonical for a subspace
std::vector<Vec4> rref(std::vector<Vec4> rows, int dim) {
    int r = 0;
    for (int c = 0; c < dim && r < static_cast<int>(rows.size()); ++c) {
        int pivot = -1;
        double best = kTol;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (std::abs(rows[i][c]) > best) {
                best = std::abs(rows[i][c]);
                pivot = i;
            }
        if (pivot < 0) continue;
        std::swap(rows[r], rows[pivot]);
        rows[r] = scale(rows[r], 1.0 / rows[r][c]);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i)
            if (i != r) rows[i] = axpy(rows[i], -rows[i][c], rows[r]);
        ++r;
    }
    rows.resize(r);
    return rows;
}

// Gram-Schmidt orthonormalization; returns empty on rank deficiency.
std::vector<Vec4> orthonormalize(const std::vector<Vec4>& vecs, bool* ok) {
    std::vector<Vec4> u;
    *ok = true;
    for (Vec4 v : vecs) {
        for (const Vec4& b : u) v = axpy(v, -dot(v, b), b);
        double n = vnorm(v);
        if (n < kTol) {
            *ok = false;
            return {};
        }
        u.push_back(scale(v, 1.0 / n));
    }
    return u;
}

void sign_normalize(Vec4& v) {
    for (int i = 0; i < 4; ++i) {
        long long q = quantize(v[i]);
        if (q > 0) return;
        if (q < 0) {
            v = scale(v, -1.0);
            return;
        }
    }
}

// pairwise size reduction (Lagrange/Gauss style); unique reduced basis for
// generic lattices of rank <= 2, deterministic for higher rank
void reduce_lattice(std::vector<Vec4>& basis) {
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 1000) {
        changed = false;
        std::sort(basis.begin(), basis.end(), [](const Vec4& a, const Vec4& b) {
            long long qa = quantize(vnorm(a)), qb = quantize(vnorm(b));
            if (qa != qb) return qa < qb;
            for (int i = 0; i < 4; ++i) {
                long long xa = quantize(a[i]), xb = quantize(b[i]);
                if (xa != xb) return xa < xb;
            }
            return false;
        });
        for (size_t i = 0; i < basis.size(); ++i) {
            for (size_t j = 0; j < basis.size(); ++j) {
                if (i == j) continue;
                double m = std::round(dot(basis[j], basis[i]) / norm2(basis[i]));
                if (m == 0.0) continue;
                Vec4 cand = axpy(basis[j], -m, basis[i]);
                if (vnorm(cand) < vnorm(basis[j]) - kTol) {
                    basis[j] = cand;
                    changed = true;
                }
            }
        }
    }
    for (Vec4& v : basis) sign_normalize(v);
    std::sort(basis.begin(), basis.end(), [](const Vec4& a, const Vec4& b) {
        long long qa = quantize(vnorm(a)), qb = quantize(vnorm(b));
        if (qa != qb) return qa < qb;
        for (int i = 0; i < 4; ++i) {
            long long xa = quantize(a[i]), xb = quantize(b[i]);
            if (xa != xb) return xa < xb;
        }
        return false;
    });
}

std::string canonical_string(int dim, const std::vector<Vec4>& rref_rows,
                             const std::vector<Vec4>& lattice) {
    std::ostringstream os;
    os << "d" << dim << ";S";
    for (const Vec4& v : rref_rows) {
        os << "[";
        for (int i = 0; i < dim; ++i) os << quantize(v[i]) << (i + 1 < dim ? "," : "");
        os << "]";
    }
    os << ";L";
    for (const Vec4& v : lattice) {
        os << "[";
        for (int i = 0; i < dim; ++i) os << quantize(v[i]) << (i + 1 < dim ? "," : "");
        os << "]";
    }
    return os.str();
}

// recursive lattice point enumeration with Gram-Schmidt bounds
struct LatticeEnum {
    const std::vector<Vec4>& basis;
    std::vector<Vec4> star;        // Gram-Schmidt vectors
    std::vector<std::vector<double>> mu;
    std::vector<double> star2;     // |b*_i|^2
    double r2 = 0.0;
    size_t budget = 0;
    std::vector<Vec4>* out;

    LatticeEnum(const std::vector<Vec4>& b, double r, size_t budget_, std::vector<Vec4>* o)
        : basis(b), budget(budget_), out(o) {
        int k = static_cast<int>(b.size());
        star.resize(k);
        mu.assign(k, std::vector<double>(k, 0.0));
        star2.resize(k);
        for (int i = 0; i < k; ++i) {
            star[i] = basis[i];
            for (int j = 0; j < i; ++j) {
                mu[i][j] = dot(basis[i], star[j]) / star2[j];
                star[i] = axpy(star[i], -mu[i][j], star[j]);
            }
            star2[i] = norm2(star[i]);
        }
        r2 = (r + kTol) * (r + kTol);
    }

    // coefficients filled from the last index down; center_j tracks the
    // projection of the partial sum on b*_j
    void run(int i, std::vector<double>& coeff, double used) {
        int k = static_cast<int>(basis.size());
        if (i < 0) {
            Vec4 p{0, 0, 0, 0};
            for (int j = 0; j < k; ++j) p = axpy(p, coeff[j], basis[j]);
            if (out->size() >= budget)
                throw capacity_error("enumerate_in_ball: point budget exceeded");
            out->push_back(p);
            return;
        }
        double center = 0.0;
        for (int j = i + 1; j < k; ++j) center += coeff[j] * mu[j][i];
        double slack = (r2 - used) / star2[i];
        if (slack < 0.0) return;
        double half = std::sqrt(slack);
        long long lo = llround(std::ceil(-center - half - 1e-12));
        long long hi = llround(std::floor(-center + half + 1e-12));
        for (long long z = lo; z <= hi; ++z) {
            double t = static_cast<double>(z) + center;
            double add = t * t * star2[i];
            if (add > r2 - used + kTol) continue;
            coeff[i] = static_cast<double>(z);
            run(i - 1, coeff, used + add);
        }
        coeff[i] = 0.0;
    }
};

void sort_by_norm(PointSet& s) {
    std::vector<int> idx(s.pts.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::vector<double> norms(s.pts.size());
    for (size_t i = 0; i < s.pts.size(); ++i) norms[i] = vnorm(s.pts[i]);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (norms[a] != norms[b]) return norms[a] < norms[b];
        return s.pts[a] < s.pts[b];
    });
    PointSet t;
    t.dim = s.dim;
    t.pts.reserve(s.pts.size());
    t.norm.reserve(s.pts.size());
    for (int i : idx) {
        t.pts.push_back(s.pts[i]);
        t.norm.push_back(norms[i]);
    }
    s = std::move(t);
}

size_t prefix_size(const PointSet& s, double r) {
    return std::upper_bound(s.norm.begin(), s.norm.end(), r + kTol) - s.norm.begin();
}

// uniform-grid nearest neighbor index; dim 1 uses the sorted coordinate
// directly, small sets fall back to a linear scan
struct NnIndex {
    static constexpr size_t kLinearCutoff = 64;

    int dim = 1;
    const PointSet* set = nullptr;
    double cell = 1.0;
    int max_shell = 0;  // set cells all lie within this Chebyshev radius of any base
    int64_t bb_lo[4] = {0, 0, 0, 0}, bb_hi[4] = {0, 0, 0, 0};
    std::unordered_map<uint64_t, std::vector<int>> buckets;  // indices sorted by norm
    std::vector<double> coord1;  // dim == 1: sorted coordinates

    explicit NnIndex(const PointSet& s) : dim(s.dim), set(&s) {
        if (dim == 1) {
            coord1.resize(s.pts.size());
            for (size_t i = 0; i < s.pts.size(); ++i) coord1[i] = s.pts[i][0];
            std::sort(coord1.begin(), coord1.end());
            return;
        }
        if (s.pts.size() <= kLinearCutoff) return;
        double extent = std::max(1e-6, 2.0 * s.norm.back());
        double density =
            std::pow(static_cast<double>(s.pts.size()), 1.0 / static_cast<double>(dim));
        cell = std::max(1e-9, extent / std::max(1.0, density));
        // norms ascend in `set`, so bucket vectors stay norm-sorted
        for (size_t i = 0; i < s.pts.size(); ++i) {
            buckets[key_of(s.pts[i])].push_back(static_cast<int>(i));
            for (int a = 0; a < dim; ++a) {
                int64_t c = static_cast<int64_t>(std::floor(s.pts[i][a] / cell));
                if (i == 0 || c < bb_lo[a]) bb_lo[a] = c;
                if (i == 0 || c > bb_hi[a]) bb_hi[a] = c;
            }
        }
    }

    uint64_t key_of(const Vec4& p) const {
        uint64_t k = 0;
        for (int i = 0; i < dim; ++i) {
            int64_t c = static_cast<int64_t>(std::floor(p[i] / cell)) + 0x8000;
            k = (k << 16) | static_cast<uint64_t>(c & 0xffff);
        }
        return k;
    }

    // distance from q to the points of the set with norm <= cap
    double query(const Vec4& q, double cap) const {
        double best = std::numeric_limits<double>::infinity();
        if (dim == 1) {
            // candidates on the line are within [-cap, cap]
            auto it = std::lower_bound(coord1.begin(), coord1.end(), q[0]);
            for (auto f = it; f != coord1.end(); ++f) {
                if (std::abs(*f) > cap + kTol) continue;
                best = std::min(best, std::abs(*f - q[0]));
                break;  // sorted: first in-range forward candidate is nearest forward
            }
            for (auto b = it; b != coord1.begin();) {
                --b;
                if (std::abs(*b) > cap + kTol) continue;
                best = std::min(best, std::abs(*b - q[0]));
                break;
            }
            return best;
        }
        if (set->pts.size() <= kLinearCutoff) {
            for (size_t i = 0; i < set->pts.size(); ++i) {
                if (set->norm[i] > cap + kTol) break;
                double d2 = 0.0;
                for (int a = 0; a < dim; ++a) {
                    double d = set->pts[i][a] - q[a];
                    d2 += d * d;
                }
                best = std::min(best, std::sqrt(d2));
            }
            return best;
        }
        int64_t base[4] = {0, 0, 0, 0};
        int64_t box_shells = 0;
        for (int i = 0; i < dim; ++i) {
            base[i] = static_cast<int64_t>(std::floor(q[i] / cell));
            box_shells = std::max(box_shells, std::abs(bb_lo[i] - base[i]));
            box_shells = std::max(box_shells, std::abs(bb_hi[i] - base[i]));
        }
        for (int64_t shell = 0; shell <= box_shells; ++shell) {
            if (static_cast<double>(shell - 1) * cell > best) break;
            auto visit = [&](int64_t cx, int64_t cy, int64_t cz, int64_t cw) {
                uint64_t k = 0;
                int64_t cs[4] = {cx, cy, cz, cw};
                for (int i = 0; i < dim; ++i)
                    k = (k << 16) | static_cast<uint64_t>((cs[i] + 0x8000) & 0xffff);
                auto it = buckets.find(k);
                if (it == buckets.end()) return;
                for (int idx : it->second) {
                    if (set->norm[idx] > cap + kTol) break;  // norm-sorted bucket
                    double d2 = 0.0;
                    for (int i = 0; i < dim; ++i) {
                        double d = set->pts[idx][i] - q[i];
                        d2 += d * d;
                    }
                    best = std::min(best, std::sqrt(d2));
                }
            };
            for (int64_t dx = -shell; dx <= shell; ++dx)
                for (int64_t dy = (dim > 1 ? -shell : 0); dy <= (dim > 1 ? shell : 0); ++dy)
                    for (int64_t dz = (dim > 2 ? -shell : 0); dz <= (dim > 2 ? shell : 0); ++dz)
                        for (int64_t dw = (dim > 3 ? -shell : 0); dw <= (dim > 3 ? shell : 0);
                             ++dw) {
                            int64_t cheb = std::max({std::abs(dx), std::abs(dy),
                                                     std::abs(dz), std::abs(dw)});
                            if (cheb != shell) continue;
                            visit(base[0] + dx, base[1] + dy, base[2] + dz, base[3] + dw);
                        }
        }
        return best;
    }
};

// one-sided sup_{x in A, |x|<=ra} d(x, B cap B_rb)
double one_sided(const PointSet& a, double ra, const NnIndex& bidx, double rb) {
    size_t na = prefix_size(a, ra);
    double sup = 0.0;
    for (size_t i = 0; i < na; ++i) sup = std::max(sup, bidx.query(a.pts[i], rb));
    return sup;
}

}  // namespace

ClosedSubgroupRn make_subgroup(int dim, const std::vector<std::vector<double>>& subspace,
                               const std::vector<std::vector<double>>& lattice) {
    if (dim < 1 || dim > kMaxAmbientDim)
        throw domain_error("subgroup: ambient dimension must be 1..4");
    auto to_vec = [&](const std::vector<double>& v) {
        if (static_cast<int>(v.size()) != dim)
            throw domain_error("subgroup: vector length does not match dimension");
        Vec4 out{0, 0, 0, 0};
        for (int i = 0; i < dim; ++i) out[i] = v[i];
        return out;
    };

    std::vector<Vec4> sub_raw, lat_raw;
    for (const auto& v : subspace) sub_raw.push_back(to_vec(v));
    for (const auto& v : lattice) lat_raw.push_back(to_vec(v));
    if (static_cast<int>(sub_raw.size() + lat_raw.size()) > dim)
        throw domain_error("subgroup: subspace dim + lattice rank exceeds ambient dim");

    bool ok = true;
    std::vector<Vec4> onb = orthonormalize(sub_raw, &ok);
    if (!ok) throw domain_error("subgroup: subspace basis is linearly dependent");

    // lattice vectors projected off the subspace keep the represented group
    // and make it visibly closed (discrete part orthogonal to the line part)
    std::vector<Vec4> lat;
    for (Vec4 v : lat_raw) {
        for (const Vec4& u : onb) v = axpy(v, -dot(v, u), u);
        lat.push_back(v);
    }
    std::vector<Vec4> check = orthonormalize(lat, &ok);
    if (!ok)
        throw domain_error("subgroup: lattice basis dependent (modulo the subspace)");
    reduce_lattice(lat);

    ClosedSubgroupRn h;
    h.dim = dim;
    h.subspace = onb;
    h.lattice = lat;
    h.canonical = canonical_string(dim, rref(sub_raw, dim), lat);
    return h;
}

bool same_subgroup(const ClosedSubgroupRn& a, const ClosedSubgroupRn& b) {
    if (a.dim != b.dim) return false;
    if (a.subspace.size() != b.subspace.size() || a.lattice.size() != b.lattice.size())
        return false;
    // subspaces: mutual containment of orthonormal bases
    auto in_span = [&](const Vec4& v, const std::vector<Vec4>& onb) {
        Vec4 res = v;
        for (const Vec4& u : onb) res = axpy(res, -dot(res, u), u);
        return vnorm(res) < 1e-7;
    };
    for (const Vec4& v : a.subspace)
        if (!in_span(v, b.subspace)) return false;
    for (const Vec4& v : b.subspace)
        if (!in_span(v, a.subspace)) return false;
    // lattices: coordinates of one basis in the other are integers (both ways)
    auto integral = [&](const std::vector<Vec4>& x, const std::vector<Vec4>& y) {
        // solve y-coordinates by Gram projections (y is a basis of its span)
        int k = static_cast<int>(y.size());
        for (const Vec4& v : x) {
            // least squares via normal equations on the Gram matrix
            std::vector<std::vector<double>> m(k, std::vector<double>(k + 1, 0.0));
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) m[i][j] = dot(y[i], y[j]);
                m[i][k] = dot(y[i], v);
            }
            // gaussian elimination
            for (int c = 0; c < k; ++c) {
                int p = c;
                for (int i = c + 1; i < k; ++i)
                    if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
                if (std::abs(m[p][c]) < 1e-12) return false;
                std::swap(m[c], m[p]);
                for (int i = 0; i < k; ++i) {
                    if (i == c) continue;
                    double f = m[i][c] / m[c][c];
                    for (int j = c; j <= k; ++j) m[i][j] -= f * m[c][j];
                }
            }
            Vec4 recon{0, 0, 0, 0};
            for (int i = 0; i < k; ++i) {
                double coef = m[i][k] / m[i][i];
                if (std::abs(coef - std::round(coef)) > 1e-6) return false;
                recon = axpy(recon, std::round(coef), y[i]);
            }
            if (vnorm(sub(recon, v)) > 1e-6) return false;  // v outside span(y)
        }
        return true;
    };
    if (a.lattice.empty()) return true;
    return integral(a.lattice, b.lattice) && integral(b.lattice, a.lattice);
}

PointSet enumerate_in_ball(const ClosedSubgroupRn& h, double r, double net_step,
                           size_t budget) {
    if (!(r > 0.0)) throw domain_error("enumerate_in_ball: radius must be positive");
    if (!(net_step > 0.0)) throw domain_error("enumerate_in_ball: net_step must be positive");

    std::vector<Vec4> lattice_pts;
    if (h.lattice.empty()) {
        lattice_pts.push_back({0, 0, 0, 0});
    } else {
        LatticeEnum en(h.lattice, r, budget, &lattice_pts);
        std::vector<double> coeff(h.lattice.size(), 0.0);
        en.run(static_cast<int>(h.lattice.size()) - 1, coeff, 0.0);
    }

    PointSet out;
    out.dim = h.dim;
    int d = static_cast<int>(h.subspace.size());
    if (d == 0) {
        out.pts = std::move(lattice_pts);
    } else {
        // grid spacing t = net_step/sqrt(d) gives covering radius <= net_step
        // inside every coset ball (boundary included via the pulled-in point)
        double t = net_step / std::sqrt(static_cast<double>(d));
        for (const Vec4& lam : lattice_pts) {
            double rest = r * r - norm2(lam);
            if (rest < -kTol) continue;
            double rr = std::sqrt(std::max(rest, 0.0));
            long long span = static_cast<long long>(std::floor(rr / t + kTol));
            // odometer over the grid box, keep |t z| <= rr
            std::vector<long long> idx(d, -span);
            while (true) {
                double g2 = 0.0;
                for (int i = 0; i < d; ++i) g2 += static_cast<double>(idx[i]) * idx[i];
                g2 *= t * t;
                if (g2 <= rest + kTol) {
                    Vec4 p = lam;
                    for (int i = 0; i < d; ++i)
                        p = axpy(p, t * static_cast<double>(idx[i]), h.subspace[i]);
                    if (out.pts.size() >= budget)
                        throw capacity_error("enumerate_in_ball: point budget exceeded");
                    out.pts.push_back(p);
                }
                int c = 0;
                while (c < d && ++idx[c] > span) idx[c++] = -span;
                if (c == d) break;
            }
        }
    }
    sort_by_norm(out);
    if (out.pts.empty() || out.norm[0] > kTol) {
        // 0 is always a member; guard against numeric edge cases
        out.pts.insert(out.pts.begin(), Vec4{0, 0, 0, 0});
        out.norm.insert(out.norm.begin(), 0.0);
    }
    return out;
}

double hausdorff_distance(const PointSet& a, const PointSet& b) {
    if (a.pts.empty() || b.pts.empty())
        throw domain_error("hausdorff_distance: empty point set");
    if (a.dim != b.dim) throw domain_error("hausdorff_distance: dimension mismatch");
    double inf = std::numeric_limits<double>::infinity();
    NnIndex ia(a), ib(b);
    double h1 = one_sided(a, inf, ib, inf);
    double h2 = one_sided(b, inf, ia, inf);
    return std::max(h1, h2);
}

RhoResult chabauty_distance(const ClosedSubgroupRn& h1, const ClosedSubgroupRn& h2,
                            const QuadSpec& quad) {
    if (h1.dim != h2.dim) throw domain_error("chabauty_distance: dimension mismatch");
    if (!(quad.r_cut > 0.0) || !(quad.step > 0.0) || !(quad.net_step > 0.0))
        throw domain_error("chabauty_distance: quadrature parameters must be positive");

    int cells = static_cast<int>(std::ceil(quad.r_cut / quad.step - 1e-12));
    double r_cut = cells * quad.step;
    double tail = (r_cut + 1.0) * std::exp(-r_cut);

    if (h1.canonical == h2.canonical) return {0.0, tail};

    PointSet a = enumerate_in_ball(h1, r_cut, quad.net_step, quad.budget);
    PointSet b = enumerate_in_ball(h2, r_cut, quad.net_step, quad.budget);
    NnIndex ia(a), ib(b);

    auto hd_at = [&](double ra, double rb) {
        return std::max(one_sided(a, ra, ib, rb), one_sided(b, rb, ia, ra));
    };

    double value = 0.0, quad_err = 0.0;
    for (int i = 0; i < cells; ++i) {
        double lo = i * quad.step, hi = (i + 1) * quad.step, mid = lo + 0.5 * quad.step;
        double g_mid = hd_at(mid, mid);
        value += g_mid * std::exp(-mid) * quad.step;
        // sup over the cell <= M (grown sets vs shrunk balls), inf >= L
        double m_hi = std::max(one_sided(a, hi, ib, lo), one_sided(b, hi, ia, lo));
        double l_lo = std::max(one_sided(a, lo, ib, hi), one_sided(b, lo, ia, hi));
        double e_lo = std::exp(-lo), e_hi = std::exp(-hi);
        quad_err += quad.step * ((m_hi - l_lo) * e_lo + m_hi * (e_lo - e_hi));
    }

    double net_err = 0.0;
    if (!h1.subspace.empty()) net_err += quad.net_step;
    if (!h2.subspace.empty()) net_err += quad.net_step;
    net_err *= 1.0 - std::exp(-r_cut);

    return {value, quad_err + net_err + tail};
}

}  // namespace chab
