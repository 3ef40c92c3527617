#pragma once

namespace bondsym::cli {

/// Command-line entry point. Subcommands: verify, oracle, price, transform,
/// flow, cases. Returns 0 when every executed check passed, 1 on domain or
/// numeric failure, 2 on usage errors.
int run(int argc, const char* const* argv);

} // namespace bondsym::cli
