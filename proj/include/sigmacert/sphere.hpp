#pragma once

// Exact geometry on character spheres: open hemisphere tests with Farkas
// certificates, spherical polytopes and Sigma-complement sets.

#include <optional>
#include <string>
#include <vector>

#include "sigmacert/group_io.hpp"
#include "sigmacert/zlinalg.hpp"

namespace sigmacert {

/// Some x >= 0 with A x = b (phase one simplex, Bland's rule), or nullopt.
std::optional<QVector> nonnegative_solution(const QMatrix& a, const QVector& b);

/// Either a functional f with f.p > 0 for all points, or lambda >= 0, not all
/// zero, with sum lambda_i p_i = 0. Both are verified exactly before returning.
struct HemisphereResult {
    bool feasible = false;
    QVector functional;
    QVector farkas;
};

HemisphereResult open_hemisphere_witness(const std::vector<QVector>& points);
/// Exact re-check of a stored result against the points.
bool verify_hemisphere(const HemisphereResult& r, const std::vector<QVector>& points);

/// v is a nonnegative combination of the generators.
bool in_cone(const QVector& v, const std::vector<QVector>& generators);

/// Primitive integer representative of the ray through v (v nonzero).
QVector canonical_ray(const QVector& v);

/// Positive cone of finitely many vectors in an open half-space, kept by a
/// minimal set of canonical vertices.
class SphericalPolytope {
public:
    /// Canonicalizes, drops duplicates and redundant vertices. Throws
    /// InvalidArgument when the vertices do not lie in an open hemisphere.
    explicit SphericalPolytope(std::vector<QVector> vertices);

    std::size_t ambient() const { return ambient_; }
    const std::vector<QVector>& vertices() const { return vertices_; }
    bool is_point() const { return vertices_.size() == 1; }
    bool contains(const QVector& v) const { return in_cone(v, vertices_); }
    /// No vertex lies in the cone of the others.
    bool is_minimal() const;

    friend bool operator==(const SphericalPolytope& a, const SphericalPolytope& b);

private:
    std::size_t ambient_ = 0;
    std::vector<QVector> vertices_;  // sorted
};

/// A subset of the sphere of R^n: union of great subspheres and spherical
/// polytopes, or Unknown.
class SigmaSet {
public:
    struct Component {
        enum class Type { Subsphere, Polytope } type = Type::Polytope;
        Subspace subspace;            // Subsphere: dim >= 1
        std::vector<QVector> vertices;  // Polytope
        friend bool operator==(const Component& a, const Component& b);
    };

    static SigmaSet empty(std::size_t ambient);
    static SigmaSet whole(std::size_t ambient);
    static SigmaSet subsphere(const Subspace& s);
    static SigmaSet points(std::size_t ambient, const std::vector<QVector>& points);
    static SigmaSet unknown(std::size_t ambient, std::string reason);

    SigmaSet& add_subsphere(const Subspace& s);
    SigmaSet& add_polytope(const SphericalPolytope& p);

    std::size_t ambient() const { return ambient_; }
    bool is_unknown() const { return unknown_; }
    bool is_empty() const { return !unknown_ && components_.empty(); }
    bool is_whole_sphere() const;
    const std::vector<Component>& components() const { return components_; }
    const std::string& unknown_reason() const { return reason_; }

    /// "Empty", "WholeSphere", "Subsphere", "FinitePolytopeUnion", "Mixed" or "Unknown".
    std::string variant() const;
    bool contains(const QVector& v) const;
    /// All polytope vertices (isolated points included).
    std::vector<QVector> vertices() const;

    /// Same subset (component order ignored).
    friend bool operator==(const SigmaSet& a, const SigmaSet& b);

private:
    std::size_t ambient_ = 0;
    bool unknown_ = false;
    std::string reason_;
    std::vector<Component> components_;
};

/// Sigma^1(G x H)^c from the factors: A in the chi_H = 0 subsphere, B in the chi_G = 0 one.
SigmaSet spherical_join_complement(const SigmaSet& a, const SigmaSet& b);

/// Topologically isolated points (one-vertex polytopes and the two points of a
/// one-dimensional subsphere). Throws InvalidArgument on Unknown.
std::vector<QVector> isolated_points(const SigmaSet& s);

/// Image under an invertible matrix; component i of the result is the image of component i.
SigmaSet apply_linear_map(const SigmaSet& s, const QMatrix& m);
/// For each component of `image`, the index of the equal component of `original`
/// (nullopt when there is none).
std::vector<std::optional<std::size_t>> component_permutation(const SigmaSet& original, const SigmaSet& image);

/// Preimage of s under an injective linear map R (columns: ambient of s). Used
/// to restrict a kernel's set to Fix and express it in coordinates of G.
SigmaSet preimage(const SigmaSet& s, const QMatrix& r);

/// Extreme rays of {V lambda : lambda >= 0} intersected with the subspace.
std::vector<QVector> cone_intersect_subspace(const std::vector<QVector>& generators, const Subspace& l);

Json to_json(const SigmaSet& s);
SigmaSet sigma_set_from_json(const Json& j, const std::string& location = "$");
Json to_json(const HemisphereResult& r);

}  // namespace sigmacert
