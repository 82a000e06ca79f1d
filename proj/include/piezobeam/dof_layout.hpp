#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <string_view>
#include <vector>

#include "piezobeam/fe_basis.hpp"
#include "piezobeam/mesh.hpp"
#include "piezobeam/model.hpp"

namespace piezobeam {

enum class Field { V, W, Psi, Q, QTop, QBottom };

std::string_view to_string(Field f);
constexpr bool is_charge(Field f) { return f == Field::Q || f == Field::QTop || f == Field::QBottom; }
constexpr bool is_bending(Field f) { return f == Field::W || f == Field::Psi; }

struct FieldBlock {
    Field field;
    BasisKind basis;
    int first_element;  ///< support is elements [first_element, last_element)
    int last_element;
    Eigen::Index offset;
    Eigen::Index count;

    bool supports(int element) const { return element >= first_element && element < last_element; }
};

struct ElementDofs {
    std::array<Eigen::Index, 4> index{};
    int size = 0;
};

/// Global numbering: fields are contiguous blocks, mechanical fields first
/// (v, w, psi) then charges. Charges of patch variants live on the patch only.
class DofLayout {
public:
    DofLayout(const Mesh& mesh, std::vector<FieldBlock> blocks);

    Eigen::Index size() const { return size_; }
    const std::vector<FieldBlock>& blocks() const { return blocks_; }
    bool has(Field f) const;
    const FieldBlock& block(Field f) const;
    std::vector<Field> fields() const;

    ElementDofs element_dofs(Field f, int element) const;

    /// Dof attached to a mesh node: value (component 0) or, for Hermite,
    /// slope (component 1). P2 midpoint dofs are not addressable this way.
    Eigen::Index node_dof(Field f, int node, int component = 0) const;

    /// Field tag of every global dof.
    std::vector<Field> dof_fields() const;

    /// Dofs removed by the essential conditions of the mechanical bc.
    std::vector<Eigen::Index> clamped_dofs(MechanicalBc bc) const;

    bool operator==(const DofLayout&) const;

private:
    std::vector<FieldBlock> blocks_;
    Eigen::Index size_ = 0;
    int element_count_ = 0;
};

DofLayout make_layout(const ValidatedModelSpec& spec, const Mesh& mesh);

/// Value (or derivative) of one field at x from a full coefficient vector.
double evaluate_field(const Mesh& mesh, const DofLayout& layout, const Eigen::VectorXd& coeffs, Field f,
                      double x, int derivative = 0);

/// Nodal interpolation of a smooth function into one field's dofs. For
/// Hermite fields `slope` supplies the nodal derivative; P2 midpoints are
/// sampled at the element centre.
void interpolate_field(const Mesh& mesh, const DofLayout& layout, Eigen::VectorXd& coeffs, Field f,
                       const std::function<double(double)>& value,
                       const std::function<double(double)>& slope = {});

}  // namespace piezobeam
