#pragma once

#include "helixlab/manifold.hpp"

namespace helixlab {

struct CatalogHelixDirection {
    Eigen::VectorXd d;
    double theta;
};

struct CatalogEntry {
    std::string name;
    Immersion immersion;
    std::vector<CatalogHelixDirection> helix_directions;
    int second_normal_dim = 0;
    bool full = false;
    std::string notes;
};

// Built-in immersions with known ground truth. Throws InputError on an
// unknown name.
const CatalogEntry& catalog_get(const std::string& name);
std::vector<std::string> catalog_list();

} // namespace helixlab
