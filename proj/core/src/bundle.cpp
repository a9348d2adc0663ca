#include "multisym/bundle.hpp"

#include "multisym/error.hpp"

#include <cmath>
#include <sstream>

namespace multisym {

BundleShape::BundleShape(int n, int N) : n_(n), N_(N) {
    if (n < 1 || N < 1) throw ArgumentError("bundle shape requires n >= 1 and N >= 1");
}

std::pair<int, int> BundleShape::momentum_of(int slot) const {
    const int offset = slot - (n_ + N_);
    if (offset < 0 || offset >= n_ * N_) throw ArgumentError("slot is not a momentum coordinate");
    return {offset % n_, offset / n_};
}

std::string BundleShape::coordinate_name(int slot) const {
    std::ostringstream s;
    if (slot < 0 || slot > dim_P()) throw ArgumentError("coordinate slot out of range");
    if (slot < n_) {
        s << 'x' << slot + 1;
    } else if (slot < n_ + N_) {
        s << 'q' << slot - n_ + 1;
    } else if (slot < dim_P()) {
        const auto [mu, a] = momentum_of(slot);
        s << 'p' << a + 1 << '_' << mu + 1;
    } else {
        s << 'p';
    }
    return s.str();
}

std::vector<std::string> BundleShape::coordinate_names(bool include_p) const {
    std::vector<std::string> out;
    const int count = include_p ? dim_M() : dim_P();
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(coordinate_name(i));
    return out;
}

PPoint::PPoint(BundleShape shape, Vector coords) : shape_(shape), coords_(std::move(coords)) {
    if (coords_.size() != shape_.dim_P()) throw DimensionError("P(pi) point has wrong dimension");
}

MPoint::MPoint(BundleShape shape, Vector coords) : shape_(shape), coords_(std::move(coords)) {
    if (coords_.size() != shape_.dim_M()) throw DimensionError("M(pi) point has wrong dimension");
}

MPoint::MPoint(const PPoint& z, double p) : shape_(z.shape()), coords_(z.shape().dim_M()) {
    coords_.head(shape_.dim_P()) = z.coords();
    coords_[shape_.p()] = p;
}

PPoint rho(const MPoint& eta) { return PPoint(eta.shape(), eta.coords().head(eta.shape().dim_P())); }

Vector kappa(const PPoint& z) { return z.coords().head(z.shape().dim_E()); }

Vector tau(const PPoint& z) { return z.coords().head(z.shape().n()); }

Vector HamiltonVolterraFunction::partials(const Vector& z, const DifferentiationConfig& cfg) const {
    if (z.size() != shape.dim_P()) throw DimensionError("Hamilton-Volterra partials: point has wrong dimension");
    return multisym::gradient(as_field(), z, cfg);
}

HamiltonVolterraFunction HamiltonVolterraFunction::zero(BundleShape shape) {
    const int d = shape.dim_P();
    return {shape, [](const Vector&) { return 0.0; }, [d](const Vector&) { return Vector(Vector::Zero(d)); }};
}

AlternatingForm hat_volume(int ambient_dim, int n, int mu) {
    Vector e = Vector::Zero(ambient_dim);
    e[mu] = 1.0;
    return interior(e, AlternatingForm::volume(ambient_dim, 0, n));
}

namespace {

// sum_{a, mu} coeff(mu, a) dq^a ^ d^{n-1}x^mu-hat in an ambient space of dimension d.
template <class Coeff>
AlternatingForm momentum_part(const BundleShape& shape, int d, Coeff coeff) {
    const int n = shape.n();
    AlternatingForm out(d, n);
    for (int mu = 0; mu < n; ++mu) {
        const AlternatingForm hat = hat_volume(d, n, mu);
        for (int a = 0; a < shape.N(); ++a) {
            const double c = coeff(mu, a);
            if (c == 0.0) continue;
            out += c * wedge(AlternatingForm::basis(d, shape.q(a)), hat);
        }
    }
    return out;
}

// sum dp^mu_a ^ dq^a ^ d^{n-1}x^mu-hat in an ambient space of dimension d.
AlternatingForm canonical_block(const BundleShape& shape, int d) {
    const int n = shape.n();
    AlternatingForm out(d, n + 1);
    for (int mu = 0; mu < n; ++mu) {
        const AlternatingForm hat = hat_volume(d, n, mu);
        for (int a = 0; a < shape.N(); ++a) {
            out += wedge(wedge(AlternatingForm::basis(d, shape.pmom(mu, a)), AlternatingForm::basis(d, shape.q(a))),
                         hat);
        }
    }
    return out;
}

}  // namespace

AlternatingForm liouville_form(const BundleShape& shape, const MPoint& eta) {
    if (!(eta.shape() == shape)) throw DimensionError("liouville_form: point shape mismatch");
    const int d = shape.dim_M();
    AlternatingForm theta = eta.p() * AlternatingForm::volume(d, 0, shape.n());
    theta += momentum_part(shape, d, [&](int mu, int a) { return eta[shape.pmom(mu, a)]; });
    return theta;
}

FormField liouville_field(const BundleShape& shape) {
    FormField f;
    f.dim = shape.dim_M();
    f.degree = shape.n();
    f.at = [shape](const Vector& y) { return liouville_form(shape, MPoint(shape, y)); };
    return f;
}

AlternatingForm omega_coordinate(const BundleShape& shape) {
    const int d = shape.dim_M();
    AlternatingForm omega = -wedge(AlternatingForm::basis(d, shape.p()), AlternatingForm::volume(d, 0, shape.n()));
    omega -= canonical_block(shape, d);
    return omega;
}

FormField omega_field(const BundleShape& shape) {
    FormField f = FormField::constant(omega_coordinate(shape));
    return f;
}

std::vector<Vector> vertical_basis_M(const BundleShape& shape) {
    std::vector<Vector> out;
    for (int i = shape.n(); i < shape.dim_M(); ++i) {
        Vector e = Vector::Zero(shape.dim_M());
        e[i] = 1.0;
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<Vector> vertical_basis_P(const BundleShape& shape) {
    std::vector<Vector> out;
    for (int i = shape.n(); i < shape.dim_P(); ++i) {
        Vector e = Vector::Zero(shape.dim_P());
        e[i] = 1.0;
        out.push_back(std::move(e));
    }
    return out;
}

AlternatingForm omega_h(const HamiltonVolterraFunction& hv, const PPoint& z, const DifferentiationConfig& cfg) {
    const BundleShape& shape = hv.shape;
    const int d = shape.dim_P();
    AlternatingForm out = wedge(AlternatingForm::from_gradient(hv.partials(z.coords(), cfg)),
                                AlternatingForm::volume(d, 0, shape.n()));
    out -= canonical_block(shape, d);
    return out;
}

FormField omega_h_field(const HamiltonVolterraFunction& hv, const DifferentiationConfig& cfg) {
    FormField f;
    f.dim = hv.shape.dim_P();
    f.degree = hv.shape.n() + 1;
    f.at = [hv, cfg](const Vector& z) { return omega_h(hv, PPoint(hv.shape, z), cfg); };
    return f;
}

AlternatingForm theta_h(const HamiltonVolterraFunction& hv, const PPoint& z) {
    const BundleShape& shape = hv.shape;
    const int d = shape.dim_P();
    AlternatingForm theta = -hv(z) * AlternatingForm::volume(d, 0, shape.n());
    theta += momentum_part(shape, d, [&](int mu, int a) { return z[shape.pmom(mu, a)]; });
    return theta;
}

FormField theta_h_field(const HamiltonVolterraFunction& hv, const DifferentiationConfig& cfg) {
    FormField f;
    f.dim = hv.shape.dim_P();
    f.degree = hv.shape.n();
    f.at = [hv](const Vector& z) { return theta_h(hv, PPoint(hv.shape, z)); };
    // d Theta_h = -omega_h
    f.derivative = [hv, cfg](const Vector& z) { return -omega_h(hv, PPoint(hv.shape, z), cfg); };
    return f;
}

MPoint hamiltonian_section(const HamiltonVolterraFunction& hv, const PPoint& z) { return MPoint(z, -hv(z)); }

SmoothMap hamiltonian_section_map(const HamiltonVolterraFunction& hv, const DifferentiationConfig& cfg) {
    const BundleShape shape = hv.shape;
    SmoothMap h;
    h.domain_dim = shape.dim_P();
    h.codomain_dim = shape.dim_M();
    h.value = [hv](const Vector& z) { return hamiltonian_section(hv, PPoint(hv.shape, z)).coords(); };
    h.jacobian = [hv, cfg](const Vector& z) {
        const int dp = hv.shape.dim_P();
        Matrix J = Matrix::Zero(dp + 1, dp);
        J.topRows(dp).setIdentity();
        J.row(dp) = -hv.partials(z, cfg).transpose();
        return J;
    };
    return h;
}

double hamiltonian_function(const HamiltonVolterraFunction& hv, const MPoint& eta) { return hv(rho(eta)) + eta.p(); }

ScalarField hamiltonian_function_field(const HamiltonVolterraFunction& hv, const DifferentiationConfig& cfg) {
    ScalarField H;
    H.value = [hv](const Vector& y) { return hamiltonian_function(hv, MPoint(hv.shape, y)); };
    H.gradient = [hv, cfg](const Vector& y) {
        const int dp = hv.shape.dim_P();
        Vector g(dp + 1);
        g.head(dp) = hv.partials(y.head(dp), cfg);
        g[dp] = 1.0;
        return g;
    };
    return H;
}

double z_derivative(const ScalarField& H, const MPoint& eta, const DifferentiationConfig& cfg) {
    const int slot = eta.shape().p();
    if (H.gradient) return H.gradient(eta.coords())[slot];
    const auto as_vec = [&H](const Vector& y) { return Vector::Constant(1, H.value(y)); };
    const ChartedDomain* domain = H.domain ? &*H.domain : nullptr;
    return partial(as_vec, eta.coords(), slot, cfg, domain)[0];
}

MPoint z_flow(const MPoint& eta, double u) {
    Vector c = eta.coords();
    c[eta.shape().p()] += u;
    return MPoint(eta.shape(), std::move(c));
}

MPoint section_from_function(const ScalarField& H, const PPoint& z, const DifferentiationConfig& cfg,
                             double admissibility_tol) {
    const MPoint base(z, 0.0);
    const double zh = z_derivative(H, base, cfg);
    if (!(std::abs(zh - 1.0) <= admissibility_tol)) {
        std::ostringstream msg;
        msg << "Z(H) = " << zh << " != 1: H does not come from a Hamiltonian section";
        throw AdmissibilityError(msg.str());
    }
    // H(base + u d/dp) = H(base) + u along the Z-flow, so the zero is at u = -H(base).
    return z_flow(base, -H.value(base.coords()));
}

MPoint chi(const HamiltonVolterraFunction& hv, const PPoint& z, double u) {
    return z_flow(hamiltonian_section(hv, z), u);
}

}  // namespace multisym
