#pragma once

#include "helixlab/manifold.hpp"

namespace helixlab {

// Plain structured-text manifold definition:
//
//   helixlab-manifold v1
//   name: tilted-plane
//   m: 2
//   n: 3
//   component: u1
//   component: u2
//   component: 0.5*u1
//   domain: -2 2
//   domain: -2 2
//
// '#' starts a comment; blank lines are ignored; exactly n component lines
// and m domain lines are required. Malformed files raise InputError with
// line-anchored diagnostics.
Immersion parse_manifold_text(const std::string& text, const std::string& source_name);

Immersion load_manifold_file(const std::string& path);

std::string manifold_to_text(const Immersion& M);

} // namespace helixlab
