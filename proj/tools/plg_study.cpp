#include "plg/study.hpp"

#include <exception>
#include <iostream>

int main(int argc, char** argv)
{
    const auto parsed = plg::parse_args(argc, argv);
    if (parsed.exit_code) {
        (*parsed.exit_code == 0 ? std::cout : std::cerr) << parsed.message;
        return *parsed.exit_code;
    }
    try {
        const auto report = plg::run_study(parsed.config);
        for (const auto& c : report.cases) {
            std::cout << "nu=" << c.flow.nu << " eps=" << c.flow.eps << '\n'
                      << plg::format_csv(c, parsed.config.primed);
            for (const auto& f : c.failures) std::cerr << "  N=" << f.N << " failed: " << f.error << '\n';
        }
        return report.all_succeeded() ? 0 : 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}
