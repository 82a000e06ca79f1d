#pragma once

#include <optional>
#include <vector>

#include "piezobeam/model.hpp"

namespace piezobeam {

/// 1D mesh of [0, L]. For patch configurations the patch edges a and b are nodes.
class Mesh {
public:
    explicit Mesh(std::vector<double> nodes, std::optional<std::pair<int, int>> patch_nodes = std::nullopt);

    int element_count() const { return static_cast<int>(nodes_.size()) - 1; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    double length() const { return nodes_.back(); }
    double element_length(int e) const { return node(e + 1) - node(e); }
    double min_element_length() const;

    bool has_patch() const { return patch_nodes_.has_value(); }
    /// Node indices of a and b.
    int patch_begin_node() const { return patch_nodes_->first; }
    int patch_end_node() const { return patch_nodes_->second; }
    bool element_in_patch(int e) const {
        return has_patch() && e >= patch_begin_node() && e < patch_end_node();
    }

    /// Element containing x (the left one at interior nodes). Throws OutOfDomain.
    int locate(double x) const;

private:
    std::vector<double> nodes_;
    std::optional<std::pair<int, int>> patch_nodes_;
};

/// Uniform mesh on [0, L], or piecewise-uniform on [0,a], [a,b], [b,L] with
/// the elements apportioned by segment length (at least one per segment).
/// Throws TooFewElements for n < 2 (n < 4 with a patch).
Mesh build_mesh(const BeamGeometry& geometry, int n_elements, bool with_patch);

inline Mesh build_mesh(const ValidatedModelSpec& spec, int n_elements) {
    return build_mesh(spec.geometry(), n_elements, is_patch(spec.variant()));
}

}  // namespace piezobeam
