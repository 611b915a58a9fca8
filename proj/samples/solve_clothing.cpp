// Solves the bundled clothing customization instance with PDGA and NSGA-II and
// prints both fronts.

#include <iostream>

#include "cmcp/cmcp.hpp"

namespace {

void print_front(const char* title, const std::vector<cmcp::Solution>& front) {
  std::cout << title << " (" << front.size() << " solutions)\n";
  for (const auto& s : front) {
    std::cout << "  time " << s.objectives.time_total << "  cost " << s.objectives.cost_total << "  services "
              << s.objectives.num_total << "  [" << cmcp::format_allocations(s.solution) << "]\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : CMCP_CONFIG_DIR "/clothing.json";
  const auto cfg = cmcp::load_config(path);

  cmcp::PdgaParams pdga = cfg.pdga_params(1);
  pdga.iterations = 100;
  print_front("PDGA, limit 0", cmcp::run_pdga(cfg.task, cfg.order, pdga));

  pdga.limit = 30000;
  print_front("PDGA, limit 30000", cmcp::run_pdga(cfg.task, cfg.order, pdga));

  cmcp::Nsga2Params nsga2 = cfg.nsga2_params(1);
  nsga2.iterations = 200;
  print_front("NSGA-II", cmcp::run_nsga2(cfg.task, cfg.order, nsga2));
}
