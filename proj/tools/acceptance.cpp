// Acceptance gate: runs the full verification battery at the acceptance
// window and prints one PASS/FAIL line per criterion. Timing goes to stderr.
// The final criterion exercises the installed command-line driver for report
// determinism and cache transparency.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "verify_suite.hpp"

namespace fs = std::filesystem;
using homalg::verify::CheckResult;
using homalg::verify::Window;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int run(const std::string& cmd) {
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// criterion 12: the driver's reports are byte-identical across reruns and
// across cached/uncached execution, and a warm cache actually hits
CheckResult check_cli_determinism() {
    CheckResult res{"report determinism and cache transparency", true, ""};
    const std::string cli = HOMALG_CLI_PATH;
    fs::path tmp = fs::temp_directory_path() / "homalg_acceptance";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    fs::path a = tmp / "a.json", b = tmp / "b.json", c = tmp / "c.json", d = tmp / "d.json";
    fs::path cache = tmp / "cache", err = tmp / "err.txt";
    auto verify_cmd = [&](const fs::path& out, bool cached) {
        std::string cmd = cli + " verify --out " + out.string();
        if (cached) cmd += " --cache " + cache.string();
        return cmd + " >/dev/null 2>" + err.string();
    };
    if (run(verify_cmd(a, false)) != 0 || run(verify_cmd(b, false)) != 0 ||
        run(verify_cmd(c, true)) != 0) {
        res.pass = false;
        res.detail = "a verification run failed";
        return res;
    }
    int warm_rc = run(verify_cmd(d, true));
    std::string warm_err = slurp(err);
    std::string ra = slurp(a), rb = slurp(b), rc_ = slurp(c), rd = slurp(d);
    if (warm_rc != 0 || ra.empty()) {
        res.pass = false;
        res.detail = "the warm run failed or produced no report";
    } else if (ra != rb) {
        res.pass = false;
        res.detail = "two uncached runs differ";
    } else if (ra != rc_ || ra != rd) {
        res.pass = false;
        res.detail = "cached and uncached reports differ";
    } else if (warm_err.find("cache hit") == std::string::npos) {
        res.pass = false;
        res.detail = "the warm cache never hit";
    } else {
        res.detail = "four runs byte-identical, warm cache hit on every check";
    }
    return res;
}

}  // namespace

int main() {
    Window win = Window::acceptance();
    using Fn = CheckResult (*)(const Window&);
    std::vector<Fn> battery = {
        homalg::verify::check_simplicial,       homalg::verify::check_comparison,
        homalg::verify::check_hkr,              homalg::verify::check_twisted_pipelines,
        homalg::verify::check_koszul,           homalg::verify::check_star,
        homalg::verify::check_euler,            homalg::verify::check_first_page,
        homalg::verify::check_degeneration,     homalg::verify::check_weyl_homology,
        homalg::verify::check_cyclic_sums};
    int failures = 0;
    for (size_t i = 0; i < battery.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        CheckResult r = battery[i](win);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (r.pass ? "PASS " : "FAIL ") << (i + 1) << " " << r.name << "\n";
        if (!r.detail.empty()) std::cout << "  " << r.detail << "\n";
        std::cerr << "criterion " << (i + 1) << ": " << secs << "s\n";
        std::cout.flush();
        if (!r.pass) ++failures;
    }
    auto t0 = std::chrono::steady_clock::now();
    CheckResult r12 = check_cli_determinism();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (r12.pass ? "PASS " : "FAIL ") << "12 " << r12.name << "\n";
    if (!r12.detail.empty()) std::cout << "  " << r12.detail << "\n";
    std::cerr << "criterion 12: " << secs << "s\n";
    if (!r12.pass) ++failures;
    return failures == 0 ? 0 : 1;
}
