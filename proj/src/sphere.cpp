#include "sigmacert/sphere.hpp"

#include <algorithm>

#include "sigmacert/errors.hpp"

namespace sigmacert {

std::optional<QVector> nonnegative_solution(const QMatrix& a, const QVector& b) {
    const std::size_t m = a.rows(), n = a.cols();
    if (b.size() != m) throw DimensionMismatch("nonnegative_solution: right-hand side length");
    const std::size_t cols = n + m, rhs = n + m;
    std::vector<QVector> t(m, QVector(cols + 1, 0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Rational s = b[i] < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = s * a(i, j);
        t[i][n + i] = 1;
        t[i][rhs] = s * b[i];
        basis[i] = n + i;
    }
    // Reduced costs of the phase one objective (sum of artificials).
    QVector cost(cols + 1, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= cols; ++j)
            if (j < n || j == rhs) cost[j] -= t[i][j];
    while (true) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols; ++j)
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        if (enter == cols) break;
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][rhs] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) leave = i, best = ratio;
        }
        if (leave == m) break;  // unbounded direction cannot occur in phase one
        const Rational piv = t[leave][enter];
        for (auto& x : t[leave]) x /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
        }
        const Rational f = cost[enter];
        for (std::size_t j = 0; j <= cols; ++j) cost[j] -= f * t[leave][j];
        basis[leave] = enter;
    }
    if (cost[rhs] != 0) return std::nullopt;
    QVector x(n, 0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) x[basis[i]] = t[i][rhs];
    return x;
}

namespace {

void check_points(const std::vector<QVector>& points) {
    for (const auto& p : points) {
        if (p.size() != points[0].size()) throw DimensionMismatch("points of different dimensions");
        if (is_zero(p)) throw InvalidArgument("zero vector does not define a point of the sphere");
    }
}

}  // namespace

bool verify_hemisphere(const HemisphereResult& r, const std::vector<QVector>& points) {
    if (r.feasible) {
        for (const auto& p : points)
            if (p.size() != r.functional.size() || dot(r.functional, p) <= 0) return false;
        return true;
    }
    if (r.farkas.size() != points.size() || points.empty()) return false;
    QVector sum(points[0].size(), 0);
    bool nonzero = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (r.farkas[i] < 0) return false;
        nonzero = nonzero || r.farkas[i] > 0;
        sum = add(sum, scale(points[i], r.farkas[i]));
    }
    return nonzero && is_zero(sum);
}

HemisphereResult open_hemisphere_witness(const std::vector<QVector>& points) {
    HemisphereResult out;
    if (points.empty()) {
        out.feasible = true;
        return out;
    }
    check_points(points);
    const std::size_t n = points[0].size(), k = points.size();
    // The sum of the canonical rays is the natural candidate.
    QVector sum(n, 0);
    for (const auto& p : points) sum = add(sum, canonical_ray(p));
    out.feasible = true;
    out.functional = sum;
    if (verify_hemisphere(out, points)) return out;

    QMatrix a(k, 2 * n + k);
    QVector b(k, 1);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = points[i][j], a(i, n + j) = -points[i][j];
        a(i, 2 * n + i) = -1;
    }
    if (auto x = nonnegative_solution(a, b)) {
        out.functional.assign(n, 0);
        for (std::size_t j = 0; j < n; ++j) out.functional[j] = (*x)[j] - (*x)[n + j];
    } else {
        QMatrix d(n + 1, k);
        QVector rhs(n + 1, 0);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < n; ++j) d(j, i) = points[i][j];
            d(n, i) = 1;
        }
        rhs[n] = 1;
        auto lambda = nonnegative_solution(d, rhs);
        if (!lambda) throw Error("open hemisphere test: neither primal nor Farkas system is feasible");
        out.feasible = false;
        out.functional.clear();
        out.farkas = *lambda;
    }
    if (!verify_hemisphere(out, points)) throw Error("open hemisphere test: witness failed exact verification");
    return out;
}

bool in_cone(const QVector& v, const std::vector<QVector>& generators) {
    if (is_zero(v)) return true;
    if (generators.empty()) return false;
    QMatrix a(v.size(), generators.size());
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t r = 0; r < v.size(); ++r) a(r, i) = generators[i][r];
    return nonnegative_solution(a, v).has_value();
}

QVector canonical_ray(const QVector& v) { return to_rational(primitive_integer(v)); }

// ------------------------------------------------------------- polytopes

SphericalPolytope::SphericalPolytope(std::vector<QVector> vertices) {
    if (vertices.empty()) throw InvalidArgument("a spherical polytope needs at least one vertex");
    check_points(vertices);
    ambient_ = vertices[0].size();
    for (auto& v : vertices) v = canonical_ray(v);
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    if (!open_hemisphere_witness(vertices).feasible)
        throw InvalidArgument("polytope vertices do not lie in an open hemisphere");
    for (std::size_t i = 0; i < vertices.size();) {
        std::vector<QVector> others = vertices;
        others.erase(others.begin() + static_cast<long>(i));
        if (!others.empty() && in_cone(vertices[i], others)) vertices = others;
        else ++i;
    }
    vertices_ = std::move(vertices);
}

bool SphericalPolytope::is_minimal() const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        std::vector<QVector> others = vertices_;
        others.erase(others.begin() + static_cast<long>(i));
        if (!others.empty() && in_cone(vertices_[i], others)) return false;
    }
    return true;
}

bool operator==(const SphericalPolytope& a, const SphericalPolytope& b) {
    return a.ambient_ == b.ambient_ && a.vertices_ == b.vertices_;
}

// ------------------------------------------------------------- sigma sets

bool operator==(const SigmaSet::Component& a, const SigmaSet::Component& b) {
    if (a.type != b.type) return false;
    return a.type == SigmaSet::Component::Type::Subsphere ? a.subspace == b.subspace : a.vertices == b.vertices;
}

SigmaSet SigmaSet::empty(std::size_t ambient) {
    SigmaSet s;
    s.ambient_ = ambient;
    return s;
}

SigmaSet SigmaSet::whole(std::size_t ambient) { return empty(ambient).add_subsphere(Subspace::whole(ambient)); }

SigmaSet SigmaSet::subsphere(const Subspace& sub) { return empty(sub.ambient()).add_subsphere(sub); }

SigmaSet SigmaSet::points(std::size_t ambient, const std::vector<QVector>& pts) {
    SigmaSet s = empty(ambient);
    for (const auto& p : pts) s.add_polytope(SphericalPolytope({p}));
    return s;
}

SigmaSet SigmaSet::unknown(std::size_t ambient, std::string reason) {
    SigmaSet s = empty(ambient);
    s.unknown_ = true;
    s.reason_ = std::move(reason);
    return s;
}

SigmaSet& SigmaSet::add_subsphere(const Subspace& sub) {
    if (sub.ambient() != ambient_) throw DimensionMismatch("subsphere in a different ambient space");
    if (sub.dim() == 0) return *this;
    Component c;
    c.type = Component::Type::Subsphere;
    c.subspace = sub;
    for (const auto& other : components_)
        if (other == c) return *this;
    components_.push_back(c);
    return *this;
}

SigmaSet& SigmaSet::add_polytope(const SphericalPolytope& p) {
    if (p.ambient() != ambient_) throw DimensionMismatch("polytope in a different ambient space");
    Component c;
    c.type = Component::Type::Polytope;
    c.subspace = Subspace(ambient_);
    c.vertices = p.vertices();
    for (const auto& other : components_)
        if (other == c) return *this;
    components_.push_back(c);
    return *this;
}

bool SigmaSet::is_whole_sphere() const {
    return !unknown_ && components_.size() == 1 && components_[0].type == Component::Type::Subsphere &&
           components_[0].subspace.dim() == ambient_;
}

std::string SigmaSet::variant() const {
    if (unknown_) return "Unknown";
    if (components_.empty()) return "Empty";
    if (is_whole_sphere()) return "WholeSphere";
    bool spheres = false, polys = false;
    for (const auto& c : components_) (c.type == Component::Type::Subsphere ? spheres : polys) = true;
    if (spheres && polys) return "Mixed";
    if (spheres) return components_.size() == 1 ? "Subsphere" : "Mixed";
    return "FinitePolytopeUnion";
}

bool SigmaSet::contains(const QVector& v) const {
    if (unknown_) throw InvalidArgument("membership in an unknown set");
    if (v.size() != ambient_) throw DimensionMismatch("membership: vector dimension");
    if (is_zero(v)) return false;
    for (const auto& c : components_) {
        if (c.type == Component::Type::Subsphere ? c.subspace.contains(v) : in_cone(v, c.vertices)) return true;
    }
    return false;
}

std::vector<QVector> SigmaSet::vertices() const {
    std::vector<QVector> out;
    for (const auto& c : components_)
        if (c.type == Component::Type::Polytope) out.insert(out.end(), c.vertices.begin(), c.vertices.end());
    return out;
}

bool operator==(const SigmaSet& a, const SigmaSet& b) {
    if (a.ambient_ != b.ambient_ || a.unknown_ != b.unknown_) return false;
    if (a.unknown_) return true;
    if (a.components_.size() != b.components_.size()) return false;
    for (const auto& c : a.components_)
        if (std::find(b.components_.begin(), b.components_.end(), c) == b.components_.end()) return false;
    return true;
}

namespace {

QVector embed(const QVector& v, std::size_t offset, std::size_t total) {
    QVector out(total, 0);
    for (std::size_t i = 0; i < v.size(); ++i) out[offset + i] = v[i];
    return out;
}

void add_embedded(SigmaSet& out, const SigmaSet& s, std::size_t offset) {
    const std::size_t total = out.ambient();
    for (const auto& c : s.components()) {
        if (c.type == SigmaSet::Component::Type::Subsphere) {
            std::vector<QVector> basis;
            for (const auto& v : c.subspace.basis_vectors()) basis.push_back(embed(v, offset, total));
            out.add_subsphere(Subspace::span(total, basis));
        } else {
            std::vector<QVector> verts;
            for (const auto& v : c.vertices) verts.push_back(embed(v, offset, total));
            out.add_polytope(SphericalPolytope(verts));
        }
    }
}

}  // namespace

SigmaSet spherical_join_complement(const SigmaSet& a, const SigmaSet& b) {
    const std::size_t n = a.ambient() + b.ambient();
    if (a.is_unknown() || b.is_unknown())
        return SigmaSet::unknown(n, "factor set unknown: " + (a.is_unknown() ? a.unknown_reason() : b.unknown_reason()));
    SigmaSet out = SigmaSet::empty(n);
    add_embedded(out, a, 0);
    add_embedded(out, b, a.ambient());
    return out;
}

std::vector<QVector> isolated_points(const SigmaSet& s) {
    if (s.is_unknown()) throw InvalidArgument("isolated points of an unknown set");
    std::vector<QVector> out;
    for (const auto& c : s.components()) {
        if (c.type == SigmaSet::Component::Type::Polytope && c.vertices.size() == 1) out.push_back(c.vertices[0]);
        if (c.type == SigmaSet::Component::Type::Subsphere && c.subspace.dim() == 1) {
            QVector v = canonical_ray(c.subspace.basis_vectors()[0]);
            out.push_back(v);
            out.push_back(scale(v, -1));
        }
    }
    return out;
}

SigmaSet apply_linear_map(const SigmaSet& s, const QMatrix& m) {
    if (m.rows() != s.ambient() || m.cols() != s.ambient()) throw DimensionMismatch("linear map of the wrong size");
    if (!inverse(m)) throw SingularMap("linear map on the character sphere must be invertible");
    if (s.is_unknown()) return s;
    SigmaSet out = SigmaSet::empty(s.ambient());
    for (const auto& c : s.components()) {
        if (c.type == SigmaSet::Component::Type::Subsphere) {
            std::vector<QVector> basis;
            for (const auto& v : c.subspace.basis_vectors()) basis.push_back(m.apply(v));
            out.add_subsphere(Subspace::span(s.ambient(), basis));
        } else {
            std::vector<QVector> verts;
            for (const auto& v : c.vertices) verts.push_back(m.apply(v));
            out.add_polytope(SphericalPolytope(verts));
        }
    }
    return out;
}

std::vector<std::optional<std::size_t>> component_permutation(const SigmaSet& original, const SigmaSet& image) {
    std::vector<std::optional<std::size_t>> out;
    for (const auto& c : image.components()) {
        auto it = std::find(original.components().begin(), original.components().end(), c);
        out.push_back(it == original.components().end()
                          ? std::nullopt
                          : std::optional<std::size_t>(static_cast<std::size_t>(it - original.components().begin())));
    }
    return out;
}

std::vector<QVector> cone_intersect_subspace(const std::vector<QVector>& generators, const Subspace& l) {
    if (generators.empty()) return {};
    const QMatrix ann = l.annihilator();
    if (ann.rows() == 0) return generators;
    const std::size_t k = generators.size();
    if (k > 16) throw InvalidArgument("cone intersection limited to 16 generators");
    QMatrix b(ann.rows(), k);
    for (std::size_t i = 0; i < k; ++i) {
        QVector col = ann.apply(generators[i]);
        for (std::size_t r = 0; r < ann.rows(); ++r) b(r, i) = col[r];
    }
    std::vector<QVector> rays;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) support.push_back(i);
        QMatrix sub(b.rows(), support.size());
        for (std::size_t j = 0; j < support.size(); ++j)
            for (std::size_t r = 0; r < b.rows(); ++r) sub(r, j) = b(r, support[j]);
        Subspace ker = Subspace::kernel(sub);
        if (ker.dim() != 1) continue;
        QVector lambda = ker.basis_vectors()[0];
        if (lambda[0] < 0) lambda = scale(lambda, -1);
        bool positive = true;
        for (const auto& x : lambda) positive = positive && x > 0;
        if (!positive) continue;
        QVector ray(generators[0].size(), 0);
        for (std::size_t j = 0; j < support.size(); ++j) ray = add(ray, scale(generators[support[j]], lambda[j]));
        if (is_zero(ray)) continue;
        ray = canonical_ray(ray);
        if (std::find(rays.begin(), rays.end(), ray) == rays.end()) rays.push_back(ray);
    }
    return rays;
}

SigmaSet preimage(const SigmaSet& s, const QMatrix& r) {
    if (r.rows() != s.ambient()) throw DimensionMismatch("preimage: map does not land in the ambient space");
    if (rank(r) != r.cols()) throw InvalidArgument("preimage: map must be injective");
    const std::size_t g = r.cols();
    if (s.is_unknown()) return SigmaSet::unknown(g, s.unknown_reason());
    SigmaSet out = SigmaSet::empty(g);
    const Subspace range = Subspace::image(r);
    for (const auto& c : s.components()) {
        if (c.type == SigmaSet::Component::Type::Subsphere) {
            const QMatrix ann = c.subspace.annihilator();
            out.add_subsphere(ann.rows() == 0 ? Subspace::whole(g) : Subspace::kernel(ann * r));
        } else {
            std::vector<QVector> pre;
            for (const auto& ray : cone_intersect_subspace(c.vertices, range)) pre.push_back(*solve(r, ray));
            if (!pre.empty()) out.add_polytope(SphericalPolytope(pre));
        }
    }
    return out;
}

// ------------------------------------------------------------- JSON

Json to_json(const SigmaSet& s) {
    Json j = {{"variant", s.variant()}, {"ambient", s.ambient()}};
    if (s.is_unknown()) {
        j["reason"] = s.unknown_reason();
        return j;
    }
    Json comps = Json::array();
    for (const auto& c : s.components()) {
        if (c.type == SigmaSet::Component::Type::Subsphere) {
            comps.push_back({{"type", "subsphere"}, {"basis", matrix_to_json(c.subspace.basis())}});
        } else {
            Json verts = Json::array();
            for (const auto& v : c.vertices) verts.push_back(vector_to_json(v));
            comps.push_back({{"type", "polytope"}, {"vertices", verts}});
        }
    }
    j["components"] = comps;
    return j;
}

SigmaSet sigma_set_from_json(const Json& j, const std::string& loc) {
    if (!j.is_object() || !j.contains("ambient") || !j["ambient"].is_number_unsigned())
        throw ParseError("sigma set needs an ambient dimension", loc);
    const std::size_t n = j["ambient"].get<std::size_t>();
    if (j.value("variant", "") == "Unknown") return SigmaSet::unknown(n, j.value("reason", ""));
    SigmaSet s = SigmaSet::empty(n);
    if (!j.contains("components")) return s;
    try {
        for (std::size_t i = 0; i < j["components"].size(); ++i) {
            const Json& c = j["components"][i];
            const std::string l = loc + ".components[" + std::to_string(i) + "]";
            const std::string type = c.value("type", "");
            if (type == "subsphere") {
                const QMatrix m = matrix_from_json(c.at("basis"), n, l + ".basis");
                std::vector<QVector> rows;
                for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
                s.add_subsphere(Subspace::span(n, rows));
            } else if (type == "polytope") {
                std::vector<QVector> verts;
                for (std::size_t v = 0; v < c.at("vertices").size(); ++v)
                    verts.push_back(vector_from_json(c["vertices"][v], l + ".vertices[" + std::to_string(v) + "]"));
                s.add_polytope(SphericalPolytope(verts));
            } else
                throw ParseError("component type must be subsphere or polytope", l);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(e.what(), loc);
    }
    return s;
}

Json to_json(const HemisphereResult& r) {
    if (r.feasible) return {{"feasible", true}, {"functional", vector_to_json(r.functional)}};
    return {{"feasible", false}, {"farkas", vector_to_json(r.farkas)}};
}

}  // namespace sigmacert
