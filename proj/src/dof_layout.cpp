#include "piezobeam/dof_layout.hpp"

#include <algorithm>
#include <sstream>

namespace piezobeam {

std::string_view to_string(Field f) {
    switch (f) {
        case Field::V: return "v";
        case Field::W: return "w";
        case Field::Psi: return "psi";
        case Field::Q: return "q";
        case Field::QTop: return "qT";
        case Field::QBottom: return "qB";
    }
    return "?";
}

namespace {

Eigen::Index dofs_for(BasisKind basis, int elements) {
    switch (basis) {
        case BasisKind::P1: return elements + 1;
        case BasisKind::P2: return 2 * elements + 1;
        case BasisKind::Hermite: return 2 * (elements + 1);
    }
    return 0;
}

}  // namespace

DofLayout::DofLayout(const Mesh& mesh, std::vector<FieldBlock> blocks)
    : blocks_(std::move(blocks)), element_count_(mesh.element_count()) {
    Eigen::Index offset = 0;
    for (auto& b : blocks_) {
        b.offset = offset;
        b.count = dofs_for(b.basis, b.last_element - b.first_element);
        offset += b.count;
    }
    size_ = offset;
}

bool DofLayout::has(Field f) const {
    return std::any_of(blocks_.begin(), blocks_.end(), [f](const FieldBlock& b) { return b.field == f; });
}

const FieldBlock& DofLayout::block(Field f) const {
    for (const auto& b : blocks_) {
        if (b.field == f) return b;
    }
    throw Error(ErrorCode::FieldShapeMismatch, "layout has no field " + std::string(to_string(f)));
}

std::vector<Field> DofLayout::fields() const {
    std::vector<Field> out;
    for (const auto& b : blocks_) out.push_back(b.field);
    return out;
}

ElementDofs DofLayout::element_dofs(Field f, int element) const {
    const FieldBlock& b = block(f);
    ElementDofs d;
    if (!b.supports(element)) return d;
    const Eigen::Index k = element - b.first_element;
    switch (b.basis) {
        case BasisKind::P1:
            d.size = 2;
            d.index = {b.offset + k, b.offset + k + 1, 0, 0};
            break;
        case BasisKind::P2:
            d.size = 3;
            d.index = {b.offset + 2 * k, b.offset + 2 * k + 1, b.offset + 2 * k + 2, 0};
            break;
        case BasisKind::Hermite:
            d.size = 4;
            d.index = {b.offset + 2 * k, b.offset + 2 * k + 1, b.offset + 2 * k + 2, b.offset + 2 * k + 3};
            break;
    }
    return d;
}

Eigen::Index DofLayout::node_dof(Field f, int node, int component) const {
    const FieldBlock& b = block(f);
    if (node < b.first_element || node > b.last_element) {
        throw Error(ErrorCode::OutOfDomain, "node outside the support of " + std::string(to_string(f)));
    }
    const Eigen::Index k = node - b.first_element;
    switch (b.basis) {
        case BasisKind::P1: return b.offset + k;
        case BasisKind::P2: return b.offset + 2 * k;
        case BasisKind::Hermite: return b.offset + 2 * k + component;
    }
    return -1;
}

std::vector<Field> DofLayout::dof_fields() const {
    std::vector<Field> out(static_cast<std::size_t>(size_));
    for (const auto& b : blocks_) {
        std::fill_n(out.begin() + b.offset, b.count, b.field);
    }
    return out;
}

std::vector<Eigen::Index> DofLayout::clamped_dofs(MechanicalBc bc) const {
    std::vector<Eigen::Index> out;
    if (bc == MechanicalBc::FreeFree) return out;
    if (bc != MechanicalBc::ClampedFree) throw Error(ErrorCode::UnknownBc, "unsupported mechanical bc");
    out.push_back(node_dof(Field::V, 0));
    out.push_back(node_dof(Field::W, 0));
    if (block(Field::W).basis == BasisKind::Hermite) {
        out.push_back(node_dof(Field::W, 0, 1));
    } else {
        out.push_back(node_dof(Field::Psi, 0));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool DofLayout::operator==(const DofLayout& other) const {
    if (size_ != other.size_ || blocks_.size() != other.blocks_.size()) return false;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const auto& a = blocks_[i];
        const auto& b = other.blocks_[i];
        if (a.field != b.field || a.basis != b.basis || a.first_element != b.first_element ||
            a.last_element != b.last_element || a.offset != b.offset || a.count != b.count) {
            return false;
        }
    }
    return true;
}

DofLayout make_layout(const ValidatedModelSpec& spec, const Mesh& mesh) {
    const Variant variant = spec.variant();
    const int ne = mesh.element_count();
    const bool eb = is_euler_bernoulli(variant);
    const bool full = spec.regime() == Regime::FullMagnetic;

    if (is_patch(variant)) {
        const BeamGeometry& g = spec.geometry();
        if (!mesh.has_patch() || mesh.node(mesh.patch_begin_node()) != g.patch_begin ||
            mesh.node(mesh.patch_end_node()) != g.patch_end) {
            throw Error(ErrorCode::MeshSpecMismatch, "patch edges must be mesh nodes");
        }
    }
    if (mesh.length() != spec.geometry().length) {
        throw Error(ErrorCode::MeshSpecMismatch, "mesh length differs from L");
    }

    std::vector<FieldBlock> blocks;
    blocks.push_back({Field::V, BasisKind::P1, 0, ne, 0, 0});
    blocks.push_back({Field::W, eb ? BasisKind::Hermite : BasisKind::P1, 0, ne, 0, 0});
    if (!eb) blocks.push_back({Field::Psi, BasisKind::P1, 0, ne, 0, 0});
    if (full) {
        if (is_patch(variant)) {
            // P2 charges: q' must span the piecewise-linear patch strain v' + h0 w''.
            const BasisKind qb = eb ? BasisKind::P2 : BasisKind::P1;
            const int a = mesh.patch_begin_node();
            const int b = mesh.patch_end_node();
            blocks.push_back({Field::QTop, qb, a, b, 0, 0});
            blocks.push_back({Field::QBottom, qb, a, b, 0, 0});
        } else {
            blocks.push_back({Field::Q, BasisKind::P1, 0, ne, 0, 0});
        }
    }
    return DofLayout(mesh, std::move(blocks));
}

double evaluate_field(const Mesh& mesh, const DofLayout& layout, const Eigen::VectorXd& coeffs, Field f,
                      double x, int derivative) {
    if (coeffs.size() != layout.size()) {
        throw Error(ErrorCode::FieldShapeMismatch, "coefficient vector does not match the layout");
    }
    int e = mesh.locate(x);
    const FieldBlock& b = layout.block(f);
    if (!b.supports(e) && b.supports(e + 1) && x == mesh.node(e + 1)) ++e;
    if (!b.supports(e)) {
        // Outside the patch a patch charge is identically zero.
        return 0.0;
    }
    const double le = mesh.element_length(e);
    const double xi = (x - mesh.node(e)) / le;
    const auto n = shape_reference(b.basis, xi, le, derivative);
    const ElementDofs d = layout.element_dofs(f, e);
    double value = 0.0;
    for (int i = 0; i < d.size; ++i) value += n[static_cast<std::size_t>(i)] * coeffs[d.index[static_cast<std::size_t>(i)]];
    return value * length_power(le, -derivative);
}

void interpolate_field(const Mesh& mesh, const DofLayout& layout, Eigen::VectorXd& coeffs, Field f,
                       const std::function<double(double)>& value, const std::function<double(double)>& slope) {
    if (coeffs.size() != layout.size()) {
        throw Error(ErrorCode::FieldShapeMismatch, "coefficient vector does not match the layout");
    }
    const FieldBlock& b = layout.block(f);
    for (int node = b.first_element; node <= b.last_element; ++node) {
        coeffs[layout.node_dof(f, node)] = value(mesh.node(node));
        if (b.basis == BasisKind::Hermite) {
            if (!slope) throw std::invalid_argument("Hermite interpolation needs a slope function");
            coeffs[layout.node_dof(f, node, 1)] = slope(mesh.node(node));
        }
    }
    if (b.basis == BasisKind::P2) {
        for (int e = b.first_element; e < b.last_element; ++e) {
            coeffs[layout.element_dofs(f, e).index[1]] = value(0.5 * (mesh.node(e) + mesh.node(e + 1)));
        }
    }
}

}  // namespace piezobeam
