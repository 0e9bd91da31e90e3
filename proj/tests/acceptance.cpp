#include <cstdio>
#include <cstring>

#include "fcw/verify.hpp"

int main(int argc, char** argv) {
    const bool extended = argc > 1 && std::strcmp(argv[1], "--extended") == 0;
    const auto results = fcw::run_suite(extended ? fcw::Suite::extended : fcw::Suite::core);
    int failed = 0;
    double total = 0;
    for (const auto& r : results) {
        failed += r.pass ? 0 : 1;
        total += r.seconds;
        std::printf("criterion %2d %s  %-40s %7.2fs  %s\n", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                    r.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed in %.2fs\n", results.size() - static_cast<std::size_t>(failed), results.size(),
                total);
    return failed == 0 ? 0 : 1;
}
