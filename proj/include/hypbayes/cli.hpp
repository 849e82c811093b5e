#pragma once

namespace hypbayes::cli {

/// Entry point of the `hypbayes` command; returns the process exit code.
int run(int argc, char** argv);

}  // namespace hypbayes::cli
