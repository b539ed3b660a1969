#pragma once

// Command-line front end. Each subcommand reads a flat key/value
// configuration layered as: built-in defaults < --config file < TVC_<KEY>
// environment variables < flags. Unknown keys are rejected.
//
// Exit codes: 0 success, 1 usage or input error, 2 numerical failure
// (non-convergence, quadrature failure).

#include <string>
#include <vector>

#include "tvc/bvapprox.hpp"
#include "tvc/io.hpp"

namespace tvc {

int run_cli(int argc, char** argv);

/// {"kind": "half-plane", "split", "height"} | {"kind": "rectangles", "rects": [[x1lo,x1hi,x2lo,x2hi,h],...]}
/// | {"kind": "bump", "alpha", "c1", "c2", "w1", "w2"} | {"kind": "constant", "value"}
AnalyticFunction2D function_from_json(const Json& j);

struct CatalogEntry {
  std::string name;
  Json spec;
};

/// half-plane, two-rectangles, bump.
std::vector<CatalogEntry> builtin_catalog();

} // namespace tvc
