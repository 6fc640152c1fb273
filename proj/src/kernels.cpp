#include "tetdisp/kernels.hpp"

namespace tetdisp {

void set_num_threads(int n) {
  if (n >= 1) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace tetdisp
