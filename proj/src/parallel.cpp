#include "nlhyp/parallel.hpp"

namespace nlhyp {

namespace {
bool initial_state() {
    const char* env = std::getenv("NLHYP_SERIAL");
    return !(env && env[0] == '1');
}
bool g_parallel = initial_state();
} // namespace

bool parallel_enabled() { return g_parallel; }
void set_parallel(bool on) { g_parallel = on; }

} // namespace nlhyp
