#pragma once

namespace windsynth::cli {

// Exit codes: 0 success, 1 usage error, 2 data or model error.
int run(int argc, char** argv);

} // namespace windsynth::cli
