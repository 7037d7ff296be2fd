#pragma once

#include <string>
#include <vector>

namespace spinchan {

// Full command-line front end; args exclude the program name.
// Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace spinchan
