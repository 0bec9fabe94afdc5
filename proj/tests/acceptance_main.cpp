#include <cstdio>
#include "diracres/verify.hpp"
int main() {
    auto rs = diracres::verify::run_acceptance(1);
    std::printf("%s", diracres::verify::report_text(rs).c_str());
    for (const auto& r : rs) if (!r.pass) return 1;
    return 0;
}
