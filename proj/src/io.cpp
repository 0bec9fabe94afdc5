#include "diracres/io.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace diracres {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int tn = std::min<std::size_t>(threads, n);
    pool.reserve(tn);
    for (int t = 0; t < tn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string states_csv(const std::vector<StateRecord>& states) {
    std::ostringstream os;
    os << "re_lambda,im_lambda,re_k,im_k,class,multiplicity,residual\n";
    for (const StateRecord& s : states)
        os << g17(s.lambda.real()) << ',' << g17(s.lambda.imag()) << ','
           << g17(s.k.real()) << ',' << g17(s.k.imag()) << ',' << to_string(s.cls)
           << ',' << s.multiplicity << ',' << g17(s.residual) << '\n';
    return os.str();
}

std::string phase_trace_csv(const PhaseTrace& tr) {
    std::ostringstream os;
    os << "lambda,re_S,im_S,phi_sc,omega\n";
    for (size_t i = 0; i < tr.lambda.size(); ++i)
        os << g17(tr.lambda[i]) << ',' << g17(tr.S[i].real()) << ','
           << g17(tr.S[i].imag()) << ',' << g17(tr.phi_sc[i]) << ','
           << g17(tr.omega[i]) << '\n';
    return os.str();
}

std::string det_grid_csv(const std::vector<DetEvaluation>& evs) {
    std::ostringstream os;
    os << "re_lambda,im_lambda,N,re_D,im_D,hs_norm,bound_margin\n";
    for (const DetEvaluation& e : evs)
        os << g17(e.lambda.real()) << ',' << g17(e.lambda.imag()) << ',' << e.nodes
           << ',' << g17(e.value.real()) << ',' << g17(e.value.imag()) << ','
           << g17(e.hs_norm) << ',' << g17(e.bound_margin) << '\n';
    return os.str();
}

std::string counting_csv(const CountingReport& rep) {
    std::ostringstream os;
    os << "r,count,predicted,sector_count,sector_outliers\n";
    for (size_t i = 0; i < rep.radii.size(); ++i)
        os << g17(rep.radii[i]) << ',' << rep.counts[i] << ','
           << g17(rep.predicted[i]) << ',' << rep.sector_counts[i] << ','
           << rep.sector_outliers[i] << '\n';
    return os.str();
}

}  // namespace diracres
