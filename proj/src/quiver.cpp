#include "ncpr/quiver.hpp"

#include <set>

namespace ncpr {

int Quiver::vertex_index(const std::string& name) const {
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == name) return static_cast<int>(i);
    throw Error("unknown vertex '" + name + "'");
}

int Quiver::arrow_index(const std::string& name) const {
    for (size_t i = 0; i < arrows.size(); ++i)
        if (arrows[i].name == name) return static_cast<int>(i);
    throw Error("unknown arrow '" + name + "'");
}

bool Quiver::has_vertex(const std::string& name) const {
    for (const auto& v : vertices)
        if (v == name) return true;
    return false;
}

bool Quiver::has_arrow(const std::string& name) const {
    for (const auto& a : arrows)
        if (a.name == name) return true;
    return false;
}

void Quiver::validate() const {
    if (vertices.empty()) throw Error("quiver has no vertices");
    std::set<std::string> seen;
    for (const auto& v : vertices)
        if (!seen.insert(v).second) throw Error("duplicate vertex '" + v + "'");
    for (const auto& a : arrows) {
        if (!seen.insert(a.name).second)
            throw Error("duplicate name '" + a.name + "'");
        if (!has_vertex(a.source))
            throw Error("arrow '" + a.name + "' has unknown source '" + a.source + "'");
        if (!has_vertex(a.target))
            throw Error("arrow '" + a.name + "' has unknown target '" + a.target + "'");
        if (a.invertible && a.degree != 0)
            throw Error("invertible arrow '" + a.name + "' must have degree 0");
        if (a.weight < 0)
            throw Error("arrow '" + a.name + "' has negative weight");
    }
}

Quiver double_quiver(const Quiver& q) {
    q.validate();
    for (const auto& a : q.arrows)
        if (!a.name.empty() && a.name.back() == '*')
            throw Error("quiver already contains starred arrow '" + a.name + "'");
    Quiver d = q;
    for (const auto& a : q.arrows) {
        Arrow dual;
        dual.name = a.name + "*";
        dual.source = a.target;
        dual.target = a.source;
        dual.degree = 0;
        dual.weight = 1;
        d.arrows.push_back(dual);
    }
    d.validate();
    return d;
}

Quiver adjoin_loops(const Quiver& q, const std::string& prefix, int degree, int weight) {
    q.validate();
    Quiver r = q;
    for (const auto& v : q.vertices) {
        Arrow loop;
        loop.name = prefix + v;
        loop.source = v;
        loop.target = v;
        loop.degree = degree;
        loop.weight = weight;
        if (r.has_arrow(loop.name) || r.has_vertex(loop.name))
            throw Error("name collision adjoining loop '" + loop.name + "'");
        r.arrows.push_back(loop);
    }
    r.validate();
    return r;
}

Quiver localize(const Quiver& q, const std::vector<std::string>& names) {
    q.validate();
    Quiver r = q;
    for (const auto& name : names) {
        Arrow& a = r.arrows[r.arrow_index(name)];
        if (a.degree != 0)
            throw Error("cannot localize arrow '" + name + "' of degree " +
                        std::to_string(a.degree));
        a.invertible = true;
    }
    return r;
}

} // namespace ncpr
