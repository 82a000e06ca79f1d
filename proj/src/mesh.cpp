#include "piezobeam/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace piezobeam {

Mesh::Mesh(std::vector<double> nodes, std::optional<std::pair<int, int>> patch_nodes)
    : nodes_(std::move(nodes)), patch_nodes_(patch_nodes) {
    if (nodes_.size() < 2) throw Error(ErrorCode::TooFewElements, "mesh needs at least one element");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1])) {
            throw Error(ErrorCode::InvalidGeometry, "mesh nodes must be strictly increasing");
        }
    }
}

double Mesh::min_element_length() const {
    double m = element_length(0);
    for (int e = 1; e < element_count(); ++e) m = std::min(m, element_length(e));
    return m;
}

int Mesh::locate(double x) const {
    if (!(x >= nodes_.front() && x <= nodes_.back())) {
        std::ostringstream os;
        os << "x = " << x << " outside [0, " << nodes_.back() << "]";
        throw Error(ErrorCode::OutOfDomain, os.str());
    }
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    const int idx = static_cast<int>(it - nodes_.begin());
    return std::clamp(idx - 1, 0, element_count() - 1);
}

namespace {

void append_segment(std::vector<double>& nodes, double from, double to, int n) {
    for (int i = 1; i <= n; ++i) {
        nodes.push_back(i == n ? to : from + (to - from) * static_cast<double>(i) / n);
    }
}

}  // namespace

Mesh build_mesh(const BeamGeometry& g, int n_elements, bool with_patch) {
    const int minimum = with_patch ? 4 : 2;
    if (n_elements < minimum) {
        std::ostringstream os;
        os << "need at least " << minimum << " elements, got " << n_elements;
        throw Error(ErrorCode::TooFewElements, os.str());
    }
    if (!with_patch) {
        std::vector<double> nodes{0.0};
        append_segment(nodes, 0.0, g.length, n_elements);
        return Mesh(std::move(nodes));
    }

    const std::array<double, 3> seg{g.patch_begin, g.patch_end - g.patch_begin, g.length - g.patch_end};
    // Largest-remainder apportionment with one element reserved per segment.
    std::array<int, 3> count{1, 1, 1};
    const int spare = n_elements - 3;
    std::array<double, 3> remainder{};
    int assigned = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double share = spare * seg[i] / g.length;
        const int whole = static_cast<int>(std::floor(share));
        count[i] += whole;
        remainder[i] = share - whole;
        assigned += whole;
    }
    for (int left = spare - assigned; left > 0; --left) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < 3; ++i) {
            if (remainder[i] > remainder[best]) best = i;
        }
        ++count[best];
        remainder[best] = -1.0;
    }

    std::vector<double> nodes{0.0};
    append_segment(nodes, 0.0, g.patch_begin, count[0]);
    const int a_node = count[0];
    append_segment(nodes, g.patch_begin, g.patch_end, count[1]);
    const int b_node = a_node + count[1];
    append_segment(nodes, g.patch_end, g.length, count[2]);
    return Mesh(std::move(nodes), std::make_pair(a_node, b_node));
}

}  // namespace piezobeam
