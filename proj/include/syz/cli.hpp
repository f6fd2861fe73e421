#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "syz/koszul.hpp"

namespace syz {

// Full command-line driver: parses args (without the program name), runs the
// requested command, writes text/JSON to `out` and diagnostics to `err`.
// Exit codes: 0 all predicates pass (or plain computation succeeded),
// 1 a predicate failed, 2 usage or model error, 3 undecidable in the window.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Macaulay-style text rendering: header row of p indices, one row per q,
// dot for zero.
std::string render_betti_table(const BettiDiagram& D);

}  // namespace syz
