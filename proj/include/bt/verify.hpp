#pragma once

#include <string>

namespace bt {

// Verification subcommands: each runs a property suite, prints one line per
// assertion with measured vs required values, and returns true iff everything
// held. Names: oracle-mc | ellipsoid | lemma-profit | appendix-e | budget-balance.
bool verify(const std::string& subcommand);

}  // namespace bt
