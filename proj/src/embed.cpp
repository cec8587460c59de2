#include "bphi/embed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

namespace bphi {

namespace {

constexpr int kRankLambda = 12;
constexpr int kUDim = 4;  // U(2) + U coordinates of Lambda

// ---- cup-product oracle -------------------------------------------------

// A wedge class sum_t coef_t c_{i_t} ^ c_{j_t} on H^1 with basis c1 = a1, c2 = a2, c3 = b1, c4 = b2.
struct Wedge {
    std::vector<std::array<int, 3>> terms;  // {coef, i, j}
};

int perm_sign(std::array<int, 4> p) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] == p[j]) return 0;
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) inv += p[i] > p[j];
    return (inv & 1) ? -1 : 1;
}

// Orientation class a1^b1^a2^b2 = c1^c3^c2^c4
const int kVolumeSign = perm_sign({1, 3, 2, 4});

long long wedge_pairing(const Wedge& x, const Wedge& y) {
    long long s = 0;
    for (const auto& [cx, i, j] : x.terms)
        for (const auto& [cy, k, l] : y.terms) s += static_cast<long long>(cx) * cy * perm_sign({i, j, k, l});
    // divide by the volume class, then double for the lattice doubling map
    return 2 * s * kVolumeSign;
}

Wedge gamma(int i, int j) { return Wedge{{{1, i, j}}}; }

// ---- small exact helpers -------------------------------------------------

using QMat = std::vector<std::vector<mpq_class>>;

QMat inverse_q(const IMat& g) {
    const int n = static_cast<int>(g.size());
    QMat a(n, std::vector<mpq_class>(2 * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a[i][j] = mpq_class(mpz_class(std::to_string(g[i][j])));
            a[i][n + j] = (i == j) ? 1 : 0;
        }
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n; ++r)
            if (a[r][c] != 0) {
                p = r;
                break;
            }
        if (p < 0) throw std::domain_error("singular Gram matrix");
        std::swap(a[c], a[p]);
        const mpq_class piv = a[c][c];
        for (auto& v : a[c]) v /= piv;
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const mpq_class f = a[r][c];
            for (int k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    QMat inv(n, std::vector<mpq_class>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
    return inv;
}

IMat gram_of(const IntegralLattice& L, const IMat& rows) {
    IMat g(rows.size(), IVec(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.size(); ++j) g[i][j] = L.inner(rows[i], rows[j]);
    return g;
}

IVec concat(const IVec& u, const IVec& w) {
    IVec v = u;
    v.insert(v.end(), w.begin(), w.end());
    return v;
}

// ---- candidate generation ------------------------------------------------

struct Pool {
    std::vector<IVec> vectors;   // E8(2) parts, sorted
    std::vector<long long> norms;
};

Pool make_pool(long long bound, long long height_bound) {
    const IntegralLattice E = lattice_E8_2();
    std::vector<IVec> vs{IVec(8, 0)};
    for (const auto& v : short_vectors(E, bound)) {
        if (height(v) > height_bound) continue;
        vs.push_back(v);
        vs.push_back(scale(v, -1));
    }
    std::stable_sort(vs.begin(), vs.end(), [&](const IVec& x, const IVec& y) {
        const long long nx = -E.norm(x), ny = -E.norm(y);
        if (nx != ny) return nx < ny;
        if (height(x) != height(y)) return height(x) < height(y);
        return x < y;
    });
    Pool p;
    for (const auto& v : vs) {
        p.norms.push_back(E.norm(v));
        p.vectors.push_back(v);
    }
    return p;
}

struct Constraint {
    IVec image;        // placed vector (Lambda coordinates)
    long long target;  // required pairing
};

// All v = (u, w) with |u_i| <= H, w from the pool, <v, y> = t for each constraint, <v,v> = norm.
std::vector<IVec> candidates(const IntegralLattice& L, const Pool& pool, const std::vector<Constraint>& cons,
                             long long norm, long long H) {
    const IMat& G = L.gram();
    IMat R;  // rows: U-part coefficients
    for (const auto& c : cons) {
        IVec row(kUDim, 0);
        for (int i = 0; i < kUDim; ++i)
            for (int j = 0; j < kUDim; ++j) row[i] += G[i][j] * c.image[j];
        R.push_back(row);
    }
    IMat GU(kUDim, IVec(kUDim));
    for (int i = 0; i < kUDim; ++i)
        for (int j = 0; j < kUDim; ++j) GU[i][j] = G[i][j];
    auto qU = [&](const IVec& u, const IVec& v) {
        long long s = 0;
        for (int i = 0; i < kUDim; ++i)
            for (int j = 0; j < kUDim; ++j) s += u[i] * GU[i][j] * v[j];
        return s;
    };
    const IntegralLattice E = lattice_E8_2();

    struct Family {
        bool solvable = false;
        IVec particular;
        IMat kernel;
    };
    std::map<IVec, Family> cache;
    const long long R_box = 2 * H + 2;
    std::vector<IVec> out;

    for (size_t pi = 0; pi < pool.vectors.size(); ++pi) {
        const IVec& w = pool.vectors[pi];
        IVec rhs(cons.size());
        for (size_t k = 0; k < cons.size(); ++k) {
            IVec yE(cons[k].image.begin() + kUDim, cons[k].image.end());
            rhs[k] = cons[k].target - E.inner(w, yE);
        }
        auto it = cache.find(rhs);
        if (it == cache.end()) {
            Family fam;
            if (R.empty()) {
                fam.solvable = true;
                fam.particular = IVec(kUDim, 0);
                fam.kernel = identity_matrix(kUDim);
            } else if (auto sol = solve_integer(R, rhs)) {
                fam.solvable = true;
                fam.particular = sol->particular;
                fam.kernel = sol->kernel.empty() ? IMat{} : lll_reduce(sol->kernel, identity_matrix(kUDim));
                // shift the particular solution towards the origin
                for (int pass = 0; pass < 3; ++pass)
                    for (const auto& k : fam.kernel) {
                        const long long kk = dot(k, k);
                        if (kk == 0) continue;
                        const long long t = std::llround(-static_cast<double>(dot(fam.particular, k)) / kk);
                        fam.particular = add(fam.particular, scale(k, t));
                    }
            }
            it = cache.emplace(rhs, std::move(fam)).first;
        }
        const Family& fam = it->second;
        if (!fam.solvable) continue;
        const long long need = norm - pool.norms[pi];  // required U-part norm
        const int d = static_cast<int>(fam.kernel.size());
        auto accept = [&](const IVec& u) {
            if (height(u) <= H && qU(u, u) == need) out.push_back(concat(u, w));
        };
        if (d == 0) {
            accept(fam.particular);
            continue;
        }
        // outer parameters in a box, last one from the quadratic equation
        std::vector<long long> t(d - 1, -R_box);
        const IVec& kl = fam.kernel[d - 1];
        const long long a2 = qU(kl, kl);
        while (true) {
            IVec base = fam.particular;
            for (int i = 0; i < d - 1; ++i) base = add(base, scale(fam.kernel[i], t[i]));
            const long long b1 = qU(base, kl);
            const long long c0 = qU(base, base) - need;
            // a2 s^2 + 2 b1 s + c0 = 0
            if (a2 == 0) {
                if (b1 == 0) {
                    if (c0 == 0)
                        for (long long s = -R_box; s <= R_box; ++s) accept(add(base, scale(kl, s)));
                } else if (c0 % (2 * b1) == 0) {
                    accept(add(base, scale(kl, -c0 / (2 * b1))));
                }
            } else {
                const long long disc = b1 * b1 - a2 * c0;
                if (disc >= 0) {
                    long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<long double>(disc))));
                    while (r * r > disc) --r;
                    while ((r + 1) * (r + 1) <= disc) ++r;
                    if (r * r == disc) {
                        for (long long sgn : {-1LL, 1LL}) {
                            const long long num = -b1 + sgn * r;
                            if (num % a2 == 0) accept(add(base, scale(kl, num / a2)));
                            if (r == 0) break;
                        }
                    }
                }
            }
            int i = 0;
            while (i < d - 1 && t[i] == R_box) t[i++] = -R_box;
            if (i == d - 1) break;
            ++t[i];
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    const IntegralLattice& Lref = L;
    (void)Lref;
    std::stable_sort(out.begin(), out.end(), [&](const IVec& x, const IVec& y) {
        IVec xE(x.begin() + kUDim, x.end()), yE(y.begin() + kUDim, y.end());
        const long long nx = -E.norm(xE), ny = -E.norm(yE);
        if (nx != ny) return nx < ny;
        if (height(x) != height(y)) return height(x) < height(y);
        return x < y;
    });
    return out;
}

// ---- vector-valued polynomials in T11, T12, T22 --------------------------

using Mono3 = std::array<int, 3>;
using VecPoly = std::map<Mono3, std::vector<mpq_class>>;
using ScalarPoly = std::map<Mono3, mpq_class>;

void vp_add(VecPoly& p, const Mono3& m, const IVec& v, const mpq_class& c) {
    auto& slot = p[m];
    if (slot.empty()) slot.assign(v.size(), 0);
    for (size_t i = 0; i < v.size(); ++i) slot[i] += c * mpq_class(mpz_class(std::to_string(v[i])));
}

Mono3 mono_mul(const Mono3& a, const Mono3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

bool vp_equal(const VecPoly& x, const VecPoly& y) {
    auto is_zero = [](const std::vector<mpq_class>& v) {
        return std::all_of(v.begin(), v.end(), [](const mpq_class& q) { return q == 0; });
    };
    for (const auto& [m, v] : x) {
        auto it = y.find(m);
        if (it == y.end()) {
            if (!is_zero(v)) return false;
        } else if (v != it->second) {
            return false;
        }
    }
    for (const auto& [m, v] : y)
        if (!x.count(m) && !is_zero(v)) return false;
    return true;
}

}  // namespace

// ---- SourceGram ------------------------------------------------------------

int SourceGram::index_of(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    return -1;
}

nlohmann::json SourceGram::to_json() const { return {{"kind", kind}, {"labels", labels}, {"gram", gram}}; }

SourceGram derive_source_gram(const std::string& kind) {
    std::vector<std::pair<std::string, Wedge>> basis = {
        {"fp", gamma(1, 2)}, {"e", gamma(3, 4)}, {"a", gamma(2, 3)}, {"b", gamma(1, 4)}};
    if (kind == "jacobian") {
        basis.push_back({"c", Wedge{{{1, 1, 3}, {-1, 2, 4}}}});
    } else if (kind != "product") {
        throw std::invalid_argument("source kind must be product or jacobian");
    }
    SourceGram s;
    s.kind = kind;
    for (const auto& [name, w] : basis) s.labels.push_back(name);
    s.gram.assign(basis.size(), IVec(basis.size()));
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < basis.size(); ++j) s.gram[i][j] = wedge_pairing(basis[i].second, basis[j].second);
    const SourceDiagnostics d = check_source(s);
    if (!d.ok)
        throw std::runtime_error("cup-product Gram fails its sign checks: signature (" +
                                 std::to_string(d.signature.first) + "," + std::to_string(d.signature.second) +
                                 "), period pairing " + std::to_string(d.period_pairing));
    return s;
}

SourceDiagnostics check_source(const SourceGram& src) {
    SourceDiagnostics d;
    IntegralLattice L(src.gram, src.kind);
    d.signature = L.signature();
    // P(T) = fp + det T e + T11 a - T22 b - T12 c at a sample point of the Siegel space
    using C = std::complex<double>;
    const C t11(0.3, 1.2), t12(0.1, 0.25), t22(-0.2, 0.9);
    const bool has_c = src.has("c");
    std::vector<C> coef(src.labels.size(), 0.0);
    coef[src.index_of("fp")] = 1.0;
    coef[src.index_of("e")] = has_c ? t11 * t22 - t12 * t12 : t11 * t22;
    coef[src.index_of("a")] = t11;
    coef[src.index_of("b")] = -t22;
    if (has_c) coef[src.index_of("c")] = -t12;
    C pp = 0, pq = 0;
    for (size_t i = 0; i < coef.size(); ++i)
        for (size_t j = 0; j < coef.size(); ++j) {
            pp += coef[i] * coef[j] * static_cast<double>(src.gram[i][j]);
            pq += coef[i] * std::conj(coef[j]) * static_cast<double>(src.gram[i][j]);
        }
    d.period_pairing = pq.real();
    const std::pair<int, int> expected = has_c ? std::pair{2, 3} : std::pair{2, 2};
    d.ok = d.signature == expected && std::abs(pp) < 1e-12 && pq.real() > 0;
    return d;
}

void validate_source(const SourceGram& src) {
    const size_t n = src.labels.size();
    if (src.gram.size() != n) throw std::invalid_argument("Gram size does not match the labels");
    for (const auto& row : src.gram)
        if (row.size() != n) throw std::invalid_argument("Gram must be square");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (src.gram[i][j] != src.gram[j][i]) throw std::invalid_argument("Gram must be symmetric");
    const int e = src.index_of("e"), fp = src.index_of("fp");
    if (e < 0 || fp < 0) throw std::invalid_argument("source needs labels fp and e");
    if (src.gram[e][e] != 0) throw std::invalid_argument("e must be isotropic");
    if (src.gram[fp][e] == 0) throw std::invalid_argument("<fp, e> must be nonzero");
    for (const char* l : {"a", "b", "c"}) {
        const int i = src.index_of(l);
        if (i >= 0 && src.gram[i][e] != 0) throw std::invalid_argument(std::string(l) + " must be orthogonal to e");
    }
}

// ---- PinnedEmbedding -------------------------------------------------------

const IVec& PinnedEmbedding::image(const std::string& label) const {
    const int i = source.index_of(label);
    if (i < 0) throw std::out_of_range("no image for label " + label);
    return images[i];
}

nlohmann::json PinnedEmbedding::to_json() const {
    nlohmann::json im = nlohmann::json::object();
    for (size_t i = 0; i < images.size(); ++i) im[source.labels[i]] = images[i];
    return {{"source", source.to_json()},
            {"gram", source.gram},
            {"pins", {{"e", level}}},
            {"level", level},
            {"images", im},
            {"flipped", flipped}};
}

PinnedEmbedding PinnedEmbedding::from_json(const nlohmann::json& j) {
    PinnedEmbedding e;
    const auto& s = j.at("source");
    e.source.kind = s.at("kind").get<std::string>();
    e.source.labels = s.at("labels").get<std::vector<std::string>>();
    e.source.gram = s.at("gram").get<IMat>();
    e.level = j.at("level").get<int>();
    e.flipped = j.value("flipped", false);
    for (const auto& l : e.source.labels) e.images.push_back(j.at("images").at(l).get<IVec>());
    return e;
}

EmbeddingCheck verify_embedding(const PinnedEmbedding& emb) {
    EmbeddingCheck c;
    const IntegralLattice L = lattice_Lambda();
    if (emb.images.size() != emb.source.labels.size()) return c;
    for (const auto& v : emb.images)
        if (static_cast<int>(v.size()) != kRankLambda) return c;
    c.gram_ok = gram_of(L, emb.images) == emb.source.gram;
    c.primitive_ok = spans_primitive(emb.images);
    c.pin_ok = emb.image("e") == lambda_e(emb.level);
    return c;
}

std::vector<IVec> complement_roots(const IMat& image_rows) {
    const IntegralLattice L = lattice_Lambda();
    const IMat comp = orthogonal_complement(L, image_rows);
    const IntegralLattice S = sublattice(L, comp);
    std::vector<IVec> roots;
    for (const auto& t : short_vectors(S, 2)) {
        if (S.norm(t) != -2) continue;
        IVec r(kRankLambda, 0);
        for (size_t j = 0; j < comp.size(); ++j) r = add(r, scale(comp[j], t[j]));
        roots.push_back(r);
    }
    return roots;
}

std::vector<DiscriminantRoot> discriminant_roots(const IMat& K, long long shift_bound) {
    const IntegralLattice L = lattice_Lambda();
    const int k = static_cast<int>(K.size());
    const IMat GK = gram_of(L, K);
    const QMat GKinv = inverse_q(GK);
    const mpz_class detz = IntegralLattice(GK).determinant();
    if (!detz.fits_slong_p()) throw std::overflow_error("image determinant too large");
    const long long det = std::llabs(detz.get_si());
    // det * (projection of each basis vector of Lambda orthogonal to K), integral
    IMat gens;
    for (int i = 0; i < kRankLambda; ++i) {
        IVec beta(kRankLambda, 0);
        beta[i] = 1;
        IVec g = scale(beta, det);
        for (int a = 0; a < k; ++a) {
            mpq_class kappa = 0;
            for (int b = 0; b < k; ++b) kappa += GKinv[a][b] * static_cast<long>(L.inner(beta, K[b]));
            kappa *= static_cast<long>(det);
            if (kappa.get_den() != 1) throw std::logic_error("projection denominator exceeds the determinant");
            g = sub(g, scale(K[a], kappa.get_num().get_si()));
        }
        gens.push_back(g);
    }
    const GeneratedBasis gb = basis_from_generators(gens);
    const IntegralLattice P = sublattice(L, gb.basis);  // norms scaled by det^2
    const long long d2 = det * det;
    std::vector<DiscriminantRoot> out;
    std::vector<IVec> both;
    for (const auto& t : short_vectors(P, 2 * d2)) {
        both.push_back(t);
        both.push_back(scale(t, -1));
    }
    for (const auto& t : both) {
        const long long pn = P.norm(t);
        if (pn >= 0) continue;
        // the K-part of a root completing this orthogonal part
        mpq_class target(static_cast<long>(pn), static_cast<unsigned long>(d2));
        target.canonicalize();
        target = -2 - target;
        IVec r(kRankLambda, 0);
        for (size_t j = 0; j < gb.coeffs.size(); ++j) r = add(r, scale(gb.coeffs[j], t[j]));
        std::vector<mpq_class> kappa(k, 0);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) kappa[a] += GKinv[a][b] * static_cast<long>(L.inner(r, K[b]));
        std::vector<long long> shift(k, -shift_bound);
        while (true) {
            mpq_class n = 0;
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    n += (kappa[a] + static_cast<long>(shift[a])) * static_cast<long>(GK[a][b]) *
                         (kappa[b] + static_cast<long>(shift[b]));
            if (n == target) {
                IVec root = r;
                for (int a = 0; a < k; ++a) root = add(root, scale(K[a], shift[a]));
                mpq_class kn = target;
                kn.canonicalize();
                std::vector<mpq_class> glue(k);
                for (int a = 0; a < k; ++a) {
                    mpz_class fl;
                    mpz_fdiv_q(fl.get_mpz_t(), kappa[a].get_num_mpz_t(), kappa[a].get_den_mpz_t());
                    glue[a] = kappa[a] - fl;
                }
                out.push_back({root, kn, glue});
                break;
            }
            int i = 0;
            while (i < k && shift[i] == shift_bound) shift[i++] = -shift_bound;
            if (i == k) break;
            ++shift[i];
        }
    }
    return out;
}

std::optional<IVec> split_root(const IMat& K) {
    for (const auto& d : discriminant_roots(K))
        if (d.image_norm == -1) return d.root;
    return std::nullopt;
}

bool discriminant_allowed(const std::string& kind, const mpq_class& image_norm) {
    if (image_norm == 0) return true;
    // a product family must avoid the discriminant; a jacobian family meets it only along H1-type walls
    if (kind == "jacobian") return image_norm == -1;
    return false;
}

bool discriminant_ok(const SourceGram& src, const IMat& images) {
    // roots sharing an image class vanish along the same wall; theta^8 needs order 8 there
    std::map<std::vector<mpq_class>, int> wall_order;
    for (const auto& d : discriminant_roots(images)) {
        if (!discriminant_allowed(src.kind, d.image_norm)) return false;
        if (d.image_norm != 0) ++wall_order[d.glue];
    }
    for (const auto& [g, n] : wall_order)
        if (n != 8) return false;
    if (src.kind == "jacobian") {
        // the diagonal T12 = 0 is a product family and must avoid the discriminant as well
        IMat diag;
        for (size_t i = 0; i < src.labels.size(); ++i)
            if (src.labels[i] != "c") diag.push_back(images[i]);
        for (const auto& d : discriminant_roots(diag))
            if (!discriminant_allowed("product", d.image_norm)) return false;
    }
    return true;
}

nlohmann::json SearchResult::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : embeddings) arr.push_back(e.to_json());
    return {{"embeddings", arr},
            {"nodes", nodes},
            {"leaves", leaves},
            {"rejected_root", rejected_root},
            {"rejected_split", rejected_split},
            {"rejected_cone", rejected_cone},
            {"exhausted", exhausted},
            {"message", message}};
}

SearchResult find_embeddings(const SourceGram& src, int level, const SearchOptions& opt) {
    validate_source(src);
    if (level != 1 && level != 2) throw std::invalid_argument("level must be 1 or 2");
    const IntegralLattice L = lattice_Lambda();
    const Pool pool = make_pool(opt.pool_norm, opt.height);
    const int ie = src.index_of("e");
    std::vector<int> order{src.index_of("fp")};
    for (const char* l : {"a", "b", "c"})
        if (src.has(l)) order.push_back(src.index_of(l));
    for (size_t i = 0; i < src.labels.size(); ++i)
        if (static_cast<int>(i) != ie && std::find(order.begin(), order.end(), static_cast<int>(i)) == order.end())
            order.push_back(static_cast<int>(i));

    SearchResult res;
    if (opt.require_periodic && level == 1 && src.has("c")) {
        // at level 1 the cusp value 1 forces a theta constant with a = 0, which is invariant under
        // T12 -> T12 + 1; that needs C/2 in M_1, whose norms lie in 16Z, but (C/2)^2 = c^2/4
        const long long cc = src.gram[src.index_of("c")][src.index_of("c")];
        if (cc % 16 != 0) {
            res.exhausted = true;
            res.message = "no level-1 family: C/2 must lie in M_1 but has norm " + std::to_string(cc) + "/4";
            return res;
        }
    }
    std::vector<IVec> images(src.labels.size());
    images[ie] = lambda_e(level);
    std::vector<int> placed{ie};
    bool stop = false;

    std::function<void(size_t)> recurse = [&](size_t depth) {
        if (stop) return;
        if (depth == order.size()) {
            ++res.leaves;
            PinnedEmbedding emb{src, level, images, false};
            if (!verify_embedding(emb).ok()) return;
            if (opt.require_root_free && !complement_roots(images).empty()) {
                ++res.rejected_root;
                return;
            }
            if (opt.require_no_split && !discriminant_ok(src, images)) {
                ++res.rejected_split;
                return;
            }
            try {
                PeriodCoeffs pc = period_coeffs(emb);
                if (!check_period_coeffs(pc)) {
                    ++res.rejected_cone;
                    return;
                }
            } catch (const std::exception&) {
                ++res.rejected_cone;
                return;
            }
            res.embeddings.push_back(emb);
            if (res.embeddings.size() >= opt.max_results) stop = true;
            return;
        }
        const int j = order[depth];
        if (opt.require_no_split && src.kind == "jacobian" && src.labels[j] == "c") {
            IMat diag;
            for (int p : placed) diag.push_back(images[p]);
            for (const auto& d : discriminant_roots(diag)) {
                if (!discriminant_allowed("product", d.image_norm)) {
                    ++res.rejected_split;
                    return;
                }
            }
        }
        std::vector<Constraint> cons;
        for (int p : placed) cons.push_back({images[p], src.gram[j][p]});
        const auto cands = candidates(L, pool, cons, src.gram[j][j], opt.height);
        for (const auto& v : cands) {
            if (stop) return;
            if (++res.nodes > opt.node_budget) {
                stop = true;
                res.message = "node budget exhausted";
                return;
            }
            images[j] = v;
            IMat rows;
            for (int p : placed) rows.push_back(images[p]);
            rows.push_back(v);
            if (!spans_primitive(rows)) continue;
            placed.push_back(j);
            recurse(depth + 1);
            placed.pop_back();
        }
    };
    recurse(0);
    res.exhausted = !stop;
    if (res.embeddings.empty())
        res.message = "none found within bounds: height " + std::to_string(opt.height) + ", E8(2) pool norm " +
                      std::to_string(opt.pool_norm) + ", node budget " + std::to_string(opt.node_budget) +
                      (res.message.empty() ? "" : " (" + res.message + ")");
    return res;
}

// ---- period coefficients -------------------------------------------------

nlohmann::json PeriodCoeffs::to_json() const {
    nlohmann::json j = {{"level", level}, {"A", A}, {"B", B}, {"D", D}};
    if (has_C()) j["C"] = C;
    return j;
}

PeriodCoeffs PeriodCoeffs::from_json(const nlohmann::json& j) {
    PeriodCoeffs p;
    p.level = j.at("level").get<int>();
    p.A = j.at("A").get<IVec>();
    p.B = j.at("B").get<IVec>();
    p.D = j.at("D").get<IVec>();
    if (j.contains("C")) p.C = j.at("C").get<IVec>();
    const size_t n = 10;
    if (p.A.size() != n || p.B.size() != n || p.D.size() != n || (p.has_C() && p.C.size() != n))
        throw std::invalid_argument("period coefficients must have 10 coordinates");
    return p;
}

namespace {

PeriodCoeffs raw_coeffs(const PinnedEmbedding& emb) {
    const IntegralLattice L = lattice_Lambda();
    const int l = emb.level;
    const IVec e = lambda_e(l);
    const long long lam = L.inner(emb.image("fp"), e);
    const long long sigma = (l == 1) ? 1 : -1;
    auto scaled = [&](const IVec& x, long long sgn) {
        if (L.inner(x, e) != 0 && &x != &emb.image("fp"))
            throw std::logic_error("image not orthogonal to the cusp vector");
        IVec m = project_to_M(x, l);
        IVec out(m.size());
        for (size_t i = 0; i < m.size(); ++i) {
            const long long num = 2 * sigma * sgn * m[i];
            if (num % lam != 0) throw std::logic_error("period coefficient is not integral");
            out[i] = num / lam;
        }
        return out;
    };
    for (const char* lab : {"a", "b", "c"}) {
        if (!emb.source.has(lab)) continue;
        // orthogonality to e means the f-coordinate vanishes; anything else is a residue
        if (L.inner(emb.image(lab), e) != 0) throw std::logic_error(std::string("residue along f for ") + lab);
    }
    PeriodCoeffs pc;
    pc.level = l;
    pc.A = scaled(emb.image("fp"), 1);
    pc.B = scaled(emb.image("a"), 1);
    pc.D = scaled(emb.image("b"), -1);
    if (emb.source.has("c")) pc.C = scaled(emb.image("c"), -1);
    return pc;
}

}  // namespace

PeriodCoeffs period_coeffs(PinnedEmbedding& emb) {
    PeriodCoeffs pc = raw_coeffs(emb);
    const ConeReference cone = cone_of_M(emb.level);
    const bool inB = cone.in_closed_cone(pc.B), inD = cone.in_closed_cone(pc.D);
    if (inB && inD) return pc;
    const bool negB = cone.in_closed_cone(scale(pc.B, -1)), negD = cone.in_closed_cone(scale(pc.D, -1));
    if (!(negB && negD)) throw std::runtime_error("B and D lie in different cone components");
    for (const char* lab : {"a", "b", "c"}) {
        const int i = emb.source.index_of(lab);
        if (i >= 0) emb.images[i] = scale(emb.images[i], -1);
    }
    emb.flipped = !emb.flipped;
    return raw_coeffs(emb);
}

PeriodCoeffs period_coeffs(const PinnedEmbedding& emb) {
    PinnedEmbedding copy = emb;
    return period_coeffs(copy);
}

bool check_period_coeffs(const PeriodCoeffs& pc) {
    const IntegralLattice M = lattice_M(pc.level);
    const ConeReference cone = cone_of_M(pc.level);
    if (M.norm(pc.B) != 0 || M.norm(pc.D) != 0 || M.inner(pc.B, pc.D) != 2) return false;
    if (!cone.in_closed_cone(pc.B) || !cone.in_closed_cone(pc.D)) return false;
    if (pc.has_C() && (M.inner(pc.B, pc.C) != 0 || M.inner(pc.D, pc.C) != 0)) return false;
    return true;
}

bool check_period_reconstruction(const PinnedEmbedding& emb, const PeriodCoeffs& pc) {
    const IntegralLattice L = lattice_Lambda();
    const IntegralLattice M = lattice_M(pc.level);
    const int l = pc.level;
    const Mono3 one{0, 0, 0}, t11{1, 0, 0}, t12{0, 1, 0}, t22{0, 0, 1};
    // period vector
    VecPoly P;
    vp_add(P, one, emb.image("fp"), 1);
    vp_add(P, mono_mul(t11, t22), emb.image("e"), 1);
    vp_add(P, t11, emb.image("a"), 1);
    vp_add(P, t22, emb.image("b"), -1);
    if (emb.source.has("c")) {
        vp_add(P, mono_mul(t12, t12), emb.image("e"), -1);
        vp_add(P, t12, emb.image("c"), -1);
    }
    // z(T) in M coordinates, with 1/2 folded into the rational coefficients
    std::vector<std::pair<Mono3, IVec>> z = {{one, pc.A}, {t11, pc.B}, {t22, pc.D}};
    if (pc.has_C()) z.push_back({t12, pc.C});
    ScalarPoly zz;
    for (const auto& [m1, v1] : z)
        for (const auto& [m2, v2] : z) {
            mpq_class q(static_cast<long>(M.inner(v1, v2)), 4);
            q.canonicalize();
            zz[mono_mul(m1, m2)] += q;
        }
    const mpq_class lam = static_cast<long>(L.inner(emb.image("fp"), lambda_e(l)));
    const long long sigma = (l == 1) ? 1 : -1;
    VecPoly I;
    for (const auto& [m, c] : zz) vp_add(I, m, lambda_e(l), -c / 2 * lam);
    vp_add(I, one, lambda_f(l), lam / l);
    for (const auto& [m, v] : z) vp_add(I, m, lift_from_M(v, l), mpq_class(static_cast<long>(sigma), 2) * lam);
    return vp_equal(P, I);
}

}  // namespace bphi
