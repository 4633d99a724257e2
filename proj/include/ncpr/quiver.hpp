#pragma once

#include "ncpr/numeric.hpp"

#include <string>
#include <vector>

namespace ncpr {

struct Arrow {
    std::string name;
    std::string source;
    std::string target;
    int degree = 0;
    int weight = 1;
    bool invertible = false;
};

// A graded quiver: ordered vertex set I plus arrows with homological degree
// and (artifact) weight. Invertible arrows must sit in degree 0.
struct Quiver {
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;

    int vertex_index(const std::string& name) const;
    int arrow_index(const std::string& name) const;
    bool has_vertex(const std::string& name) const;
    bool has_arrow(const std::string& name) const;

    // Throws on duplicate names, dangling endpoints, invertible arrows of
    // nonzero degree, or negative weight.
    void validate() const;
};

// Adds a reversed dual arrow x* (degree 0, weight 1) for every arrow.
// Errors if any starred name is already present.
Quiver double_quiver(const Quiver& q);

// One fresh loop per vertex, named prefix + vertex name.
Quiver adjoin_loops(const Quiver& q, const std::string& prefix, int degree, int weight);

// Marks the named degree-0 arrows invertible.
Quiver localize(const Quiver& q, const std::vector<std::string>& names);

} // namespace ncpr
