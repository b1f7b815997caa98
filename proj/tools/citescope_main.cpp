#include <iostream>
#include <string>
#include <vector>

#include "citescope/pipeline.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  const auto parsed = citescope::parse_args(args, std::cout, std::cerr);
  if (!parsed.config) return parsed.exit_code;

  try {
    const auto report = citescope::run_pipeline(*parsed.config, std::cerr);
    if (report.exit_code == citescope::kExitOk || report.exit_code == citescope::kExitPartial) {
      std::cerr << "output: " << report.folder.string() << "\n";
      if (report.exit_code == citescope::kExitPartial) {
        std::cerr << "warning: " << report.skipped_pages << " page(s) skipped after rate limiting"
                  << (report.publications_incomplete ? "; publication list incomplete" : "") << "\n";
      }
    }
    return report.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
