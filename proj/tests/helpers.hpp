#ifndef TESTS_HELPERS_HPP
#define TESTS_HELPERS_HPP

#include <map>
#include <memory>
#include <random>
#include <vector>

#include "deform/dgla.hpp"
#include "deform/errors.hpp"

// End^{>=0} of a finite complex V^0 -> V^1 -> ... with d = [sigma, -]:
// a genuine dgLa with nontrivial brackets in positive degrees, used as a
// randomizable test carrier.
inline deform::DGLAPtr make_end_complex_dgla(const std::vector<int>& dims,
                                             const std::vector<deform::SparseMatrix>& sigma)
{
    using namespace deform;
    struct B {
        int i, j, p, q;
    };
    const int nlev = static_cast<int>(dims.size());
    std::map<int, std::vector<B>> bydeg;
    std::map<std::tuple<int, int, int, int>, std::pair<int, int>> pos; // (i,j,p,q) -> (deg, idx)
    for (int i = 0; i < nlev; ++i)
        for (int j = i; j < nlev; ++j)
            for (int p = 0; p < dims[j]; ++p)
                for (int q = 0; q < dims[i]; ++q) {
                    int deg = j - i;
                    pos[{i, j, p, q}] = {deg, static_cast<int>(bydeg[deg].size())};
                    bydeg[deg].push_back({i, j, p, q});
                }

    auto g = std::make_shared<DGLA>();
    for (const auto& [deg, v] : bydeg) {
        std::vector<std::string> labels;
        for (const auto& b : v)
            labels.push_back("H" + std::to_string(b.i) + std::to_string(b.j) + "_"
                             + std::to_string(b.p) + std::to_string(b.q));
        g->space.components[deg] = labels;
    }

    using Coeffs = std::map<std::tuple<int, int, int, int>, Rational>;
    auto compose = [&](const Coeffs& f, const Coeffs& h) {
        // (f . h): h first, then f
        Coeffs out;
        for (const auto& [kf, cf] : f)
            for (const auto& [kh, ch] : h) {
                auto [i2, j2, p2, q2] = kf;
                auto [i1, j1, p1, q1] = kh;
                if (i2 == j1 && q2 == p1) {
                    Rational s = cf * ch;
                    if (!is_zero(s))
                        out[{i1, j2, p2, q1}] += s;
                }
            }
        for (auto it = out.begin(); it != out.end();)
            it = is_zero(it->second) ? out.erase(it) : std::next(it);
        return out;
    };
    Coeffs sig;
    for (int i = 0; i + 1 < nlev; ++i)
        for (const auto& [rc, c] : sigma.at(i).entries())
            sig[{i, i + 1, rc.first, rc.second}] = c;

    auto to_vec = [&](const Coeffs& f, int deg) {
        SparseVector v;
        for (const auto& [key, c] : f) {
            auto [d2, idx] = pos.at(key);
            if (d2 != deg)
                throw ShapeMismatch("inhomogeneous product in test helper");
            v[idx] = c;
        }
        return v;
    };
    auto unit = [&](int deg, int idx) {
        const B& b = bydeg.at(deg).at(idx);
        Coeffs f;
        f[{b.i, b.j, b.p, b.q}] = rat(1);
        return f;
    };
    auto scaled = [&](const Rational& c, Coeffs f) {
        for (auto& [k, v] : f)
            v *= c;
        return f;
    };
    auto added = [&](Coeffs a, const Coeffs& b) {
        for (const auto& [k, v] : b) {
            a[k] += v;
            if (is_zero(a[k]))
                a.erase(k);
        }
        return a;
    };

    g->d = GradedMap(g->space, g->space, 1);
    for (const auto& [deg, v] : bydeg) {
        if (bydeg.find(deg + 1) == bydeg.end())
            continue;
        SparseMatrix blk(g->space.dim(deg + 1), g->space.dim(deg));
        for (int idx = 0; idx < static_cast<int>(v.size()); ++idx) {
            Coeffs f = unit(deg, idx);
            Coeffs df = added(compose(sig, f),
                              scaled(deg % 2 == 0 ? rat(-1) : rat(1), compose(f, sig)));
            for (const auto& [i2, c] : to_vec(df, deg + 1))
                blk.set(i2, idx, c);
        }
        g->d.set_block(deg, std::move(blk));
    }

    for (const auto& [da, va] : bydeg)
        for (const auto& [db, vb] : bydeg) {
            if (da > db || bydeg.find(da + db) == bydeg.end())
                continue;
            for (int ia = 0; ia < static_cast<int>(va.size()); ++ia)
                for (int ib = (da == db ? ia : 0); ib < static_cast<int>(vb.size()); ++ib) {
                    Coeffs f = unit(da, ia), h = unit(db, ib);
                    Rational sign = (da * db) % 2 == 0 ? rat(-1) : rat(1);
                    Coeffs br = added(compose(f, h), scaled(sign, compose(h, f)));
                    SparseVector value = to_vec(br, da + db);
                    if (!value.empty())
                        g->set_bracket(da, ia, db, ib, value);
                }
        }
    return g;
}

// V^0 = K^2 -> V^1 = K^2 -> V^2 = K with sigma^2 = 0.
inline deform::DGLAPtr make_three_term_end_dgla()
{
    using deform::SparseMatrix;
    SparseMatrix s0(2, 2), s1(1, 2);
    s0.set(0, 0, deform::rat(1));
    s1.set(0, 1, deform::rat(1)); // s1 . s0 = 0
    return make_end_complex_dgla({2, 2, 1}, {s0, s1});
}

inline deform::Rational random_rat(std::mt19937& rng)
{
    std::uniform_int_distribution<int> num(-3, 3);
    return deform::rat(num(rng));
}

#endif
