#include "helixlab/catalog.hpp"

#include <cmath>
#include <map>

namespace helixlab {

namespace {

Immersion make_immersion(const std::string& name, int m, int n,
                         const std::vector<std::string>& components,
                         const std::vector<std::pair<double, double>>& domain) {
    std::vector<Expr> comps;
    comps.reserve(components.size());
    for (const auto& s : components) comps.push_back(parse_expression(s, m));
    Box box;
    box.lo.resize(m);
    box.hi.resize(m);
    for (int i = 0; i < m; ++i) {
        box.lo(i) = domain[i].first;
        box.hi(i) = domain[i].second;
    }
    return Immersion(name, m, n, std::move(comps), std::move(box));
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

const double kPi = std::acos(-1.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::map<std::string, CatalogEntry> build_catalog() {
    std::map<std::string, CatalogEntry> cat;

    {
        CatalogEntry e;
        e.name = "plane";
        e.immersion = make_immersion("plane", 2, 3, {"u1", "u2", "0"}, {{-2, 2}, {-2, 2}});
        e.helix_directions = {{vec({1, 0, 0}), 0.0},
                              {vec({kInvSqrt2, 0, kInvSqrt2}), kPi / 4},
                              {vec({0, 0, 1}), kPi / 2}};
        e.second_normal_dim = 1;
        e.full = false;
        e.notes = "flat; constant tangent plane z=0, every direction keeps a constant angle";
        cat[e.name] = std::move(e);
    }
    {
        CatalogEntry e;
        e.name = "cylinder";
        e.immersion = make_immersion("cylinder", 2, 3, {"cos(u1)", "sin(u1)", "u2"},
                                     {{-3.1, 3.1}, {-2, 2}});
        e.helix_directions = {{vec({0, 0, 1}), 0.0}};
        e.second_normal_dim = 0;
        e.full = true;
        e.notes = "axis e3 is tangent everywhere (theta = 0); the one normal direction has "
                  "nonzero shape operator";
        cat[e.name] = std::move(e);
    }
    {
        CatalogEntry e;
        e.name = "cone";
        e.immersion = make_immersion("cone", 2, 3, {"u2*cos(u1)", "u2*sin(u1)", "u2"},
                                     {{-3.1, 3.1}, {0.2, 3.0}});
        e.helix_directions = {{vec({0, 0, 1}), kPi / 4}};
        e.second_normal_dim = 0;
        e.full = true;
        e.notes = "unit slope, apex excluded; unit normal (cos u1, sin u1, -1)/sqrt(2); ruled "
                  "helix for d = e3, rulings are the meridians";
        cat[e.name] = std::move(e);
    }
    {
        CatalogEntry e;
        e.name = "helix-curve";
        e.immersion = make_immersion("helix-curve", 1, 3, {"cos(u1)", "sin(u1)", "u1"},
                                     {{-3.1, 3.1}});
        e.helix_directions = {{vec({0, 0, 1}), kPi / 4}};
        e.second_normal_dim = 1;
        e.full = true;
        e.notes = "classical helix, cos(theta) = 1/sqrt(2) against e3; exercises m = 1 and "
                  "codimension 2";
        cat[e.name] = std::move(e);
    }
    {
        CatalogEntry e;
        e.name = "helix-cylinder-4d";
        e.immersion = make_immersion("helix-cylinder-4d", 2, 4,
                                     {"cos(u1)", "sin(u1)", "u1", "u2"}, {{-3.0, 3.0}, {-2, 2}});
        e.helix_directions = {{vec({0, 0, 1, 0}), kPi / 4},
                              {vec({0, 0, kInvSqrt2, kInvSqrt2}), kPi / 6}};
        e.second_normal_dim = 1;
        e.full = true;
        e.notes = "weak 2-helix; helix lines of e3 are curved with k = 1/2; helix directions "
                  "fill span{e3, e4}";
        cat[e.name] = std::move(e);
    }
    {
        CatalogEntry e;
        e.name = "circle-cylinder-4d";
        e.immersion = make_immersion("circle-cylinder-4d", 2, 4,
                                     {"cos(u1)", "sin(u1)", "u2", "0"}, {{-3.1, 3.1}, {-2, 2}});
        e.helix_directions = {{vec({0, 0, 1, 0}), 0.0},
                              {vec({0, 0, kInvSqrt2, kInvSqrt2}), kPi / 4},
                              {vec({0, 0, 0, 1}), kPi / 2}};
        e.second_normal_dim = 1;
        e.full = false;
        e.notes = "S^1 x R embedded with constant zero fourth coordinate; second normal space "
                  "is span{e4}";
        cat[e.name] = std::move(e);
    }
    {
        CatalogEntry e;
        e.name = "sphere";
        e.immersion = make_immersion("sphere", 2, 3,
                                     {"cos(u1)*cos(u2)", "sin(u1)*cos(u2)", "sin(u2)"},
                                     {{-3.1, 3.1}, {-1.2, 1.2}});
        e.helix_directions = {};
        e.second_normal_dim = 0;
        e.full = true;
        e.notes = "negative control: the tangential norm of any fixed direction varies over "
                  "the patch, so no helix direction exists";
        cat[e.name] = std::move(e);
    }
    return cat;
}

const std::map<std::string, CatalogEntry>& catalog() {
    static const std::map<std::string, CatalogEntry> cat = build_catalog();
    return cat;
}

} // namespace

const CatalogEntry& catalog_get(const std::string& name) {
    const auto& cat = catalog();
    auto it = cat.find(name);
    if (it == cat.end()) throw InputError("unknown catalog manifold '" + name + "'");
    return it->second;
}

std::vector<std::string> catalog_list() {
    std::vector<std::string> names;
    for (const auto& [name, entry] : catalog()) names.push_back(name);
    return names;
}

} // namespace helixlab
