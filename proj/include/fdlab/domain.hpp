#ifndef FDLAB_DOMAIN_HPP
#define FDLAB_DOMAIN_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdlab {

enum class DomainShape { Ball, ExteriorBall, Annulus };

/// Which boundary sphere of the domain is meant (Annulus has two;
/// Ball has only Outer, ExteriorBall only Inner).
enum class BoundaryComponent { Inner, Outer };

/// A radially symmetric domain in R^N. The single source of truth for
/// boundary radii and curvature signs.
///
/// Sign convention: principal curvatures are taken with respect to the
/// inward normal of the domain (pointing into Omega). A boundary sphere that
/// is convex toward the domain interior (the domain lies inside it, as for
/// Ball) has curvature +1/r; a sphere the domain wraps around (ExteriorBall,
/// or the inner sphere of an Annulus) has curvature -1/r.
class RadialDomain {
public:
    static RadialDomain ball(double rho, int dimension) {
        return RadialDomain(DomainShape::Ball, rho, rho, dimension);
    }
    static RadialDomain exterior_ball(double rho, int dimension) {
        return RadialDomain(DomainShape::ExteriorBall, rho, rho, dimension);
    }
    static RadialDomain annulus(double rho_in, double rho_out, int dimension) {
        return RadialDomain(DomainShape::Annulus, rho_in, rho_out, dimension);
    }

    DomainShape shape() const { return shape_; }
    int dimension() const { return dim_; }

    double inner_radius() const { return rho_in_; }
    double outer_radius() const { return rho_out_; }

    /// Radius of the boundary sphere for a component; throws if the
    /// component does not exist for this shape.
    double boundary_radius(BoundaryComponent c) const {
        switch (shape_) {
            case DomainShape::Ball:
                if (c != BoundaryComponent::Outer)
                    throw std::invalid_argument("Ball has no inner boundary");
                return rho_out_;
            case DomainShape::ExteriorBall:
                if (c != BoundaryComponent::Inner)
                    throw std::invalid_argument("ExteriorBall has no outer boundary");
                return rho_in_;
            case DomainShape::Annulus:
                return c == BoundaryComponent::Inner ? rho_in_ : rho_out_;
        }
        throw std::logic_error("unreachable");
    }

    /// All N-1 principal curvatures at the given boundary sphere are equal;
    /// returns that common value (w.r.t. the inward normal).
    double curvature_at(BoundaryComponent c) const {
        const double r = boundary_radius(c);
        switch (shape_) {
            case DomainShape::Ball:
                return 1.0 / r;  // domain inside the sphere
            case DomainShape::ExteriorBall:
                return -1.0 / r;  // domain outside the sphere
            case DomainShape::Annulus:
                return c == BoundaryComponent::Outer ? 1.0 / r : -1.0 / r;
        }
        throw std::logic_error("unreachable");
    }

    std::vector<BoundaryComponent> boundary_components() const {
        switch (shape_) {
            case DomainShape::Ball: return {BoundaryComponent::Outer};
            case DomainShape::ExteriorBall: return {BoundaryComponent::Inner};
            case DomainShape::Annulus:
                return {BoundaryComponent::Inner, BoundaryComponent::Outer};
        }
        throw std::logic_error("unreachable");
    }

    bool contains_radius(double r) const {
        switch (shape_) {
            case DomainShape::Ball: return r >= 0.0 && r < rho_out_;
            case DomainShape::ExteriorBall: return r > rho_in_;
            case DomainShape::Annulus: return r > rho_in_ && r < rho_out_;
        }
        return false;
    }

    /// Distance from radius r (inside the domain) to the nearest boundary sphere.
    double distance_to_boundary(double r) const {
        switch (shape_) {
            case DomainShape::Ball: return rho_out_ - r;
            case DomainShape::ExteriorBall: return r - rho_in_;
            case DomainShape::Annulus:
                return std::min(r - rho_in_, rho_out_ - r);
        }
        throw std::logic_error("unreachable");
    }

    /// Signed distance (positive inside the domain).
    double signed_distance(double r) const {
        switch (shape_) {
            case DomainShape::Ball: return rho_out_ - r;
            case DomainShape::ExteriorBall: return r - rho_in_;
            case DomainShape::Annulus: {
                const double di = r - rho_in_;
                const double dout = rho_out_ - r;
                return std::abs(di) <= std::abs(dout) ? di : dout;
            }
        }
        throw std::logic_error("unreachable");
    }

    /// A representative length scale (used for default tolerances).
    double scale() const { return shape_ == DomainShape::Ball ? rho_out_ : rho_in_; }

    std::string shape_name() const {
        switch (shape_) {
            case DomainShape::Ball: return "ball";
            case DomainShape::ExteriorBall: return "exterior_ball";
            case DomainShape::Annulus: return "annulus";
        }
        return "?";
    }

private:
    RadialDomain(DomainShape s, double rin, double rout, int dim)
        : shape_(s), rho_in_(rin), rho_out_(rout), dim_(dim) {
        if (dim_ < 2) throw std::invalid_argument("dimension must be >= 2");
        if (!(rho_in_ > 0.0)) throw std::invalid_argument("radius must be positive");
        if (s == DomainShape::Annulus && !(rho_in_ < rho_out_))
            throw std::invalid_argument("annulus needs rho_in < rho_out");
    }

    DomainShape shape_;
    double rho_in_, rho_out_;
    int dim_;
};

/// A radial grid function u(r), possibly time-stamped (elliptic solutions
/// carry no time).
struct RadialField {
    std::vector<double> r_grid;  // strictly increasing
    std::vector<double> values;  // nonnegative
    std::optional<double> time;
    RadialDomain domain;

    RadialField(RadialDomain d) : domain(d) {}

    double value_at(double r) const;
};

}  // namespace fdlab

#endif
