#ifndef OSPRING_CLI_HPP
#define OSPRING_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ospring {

// Full command-line front end. Returns the process exit code:
//   0  success (analyze: stable)
//   2  analyze: unstable
//   1  any error (messages go to err)
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

} // namespace ospring

#endif // OSPRING_CLI_HPP
