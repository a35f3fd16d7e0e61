#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "deform/dgla.hpp"
#include "deform/errors.hpp"
#include "deform/pipelines.hpp"
#include "deform/scenario.hpp"

namespace {

int exit_code_for(const deform::Error& e)
{
    using namespace deform;
    if (dynamic_cast<const HypothesisViolated*>(&e) || dynamic_cast<const WindowUnstable*>(&e))
        return 2;
    if (dynamic_cast<const InternalCheckFailure*>(&e) || dynamic_cast<const NotAComplex*>(&e)
        || dynamic_cast<const InvalidSc*>(&e))
        return 3;
    return 1; // input / validation errors
}

bool selftest_line(const std::string& name, bool ok)
{
    std::cout << (ok ? "pass" : "FAIL") << "  " << name << "\n";
    return ok;
}

int run_selftest()
{
    using namespace deform;
    bool all = true;

    all &= selftest_line("gl(3) satisfies the dgLa axioms", validate_dgla(*make_matrix_dgla(3)).ok());

    bool cech_ok = true;
    CoverModel cover = make_p1_cover(6);
    for (int d = -4; d <= 4; ++d) {
        auto [h0, h1] = cech_dims(make_line_bundle(d, cover), 6);
        if (h0 != std::max(d + 1, 0) || h1 != std::max(-d - 1, 0))
            cech_ok = false;
    }
    all &= selftest_line("Cech cohomology of O(d) matches the closed form", cech_ok);

    CoherentSystem sys;
    sys.e = make_line_bundle(1, cover);
    sys.u = {GlobalSection{{lp_monomial(0)}, {lp_monomial(-1)}}};
    PairEUReport pr = pair_EU_report(sys, 4);
    all &= selftest_line("pair (O(1), span{1}): exact sequence, tangent 1",
                         pr.pass() && pr.tangent == 1 && pr.h_tot[0] == 1 && pr.h_tot[2] == 0);

    MDeltaReport md = m_delta_check(sys, 4);
    all &= selftest_line("m^Delta of (O(1), span{1}) has dimensions (0, 1, 0)",
                         md.pass() && md.h == std::array<int, 3>{0, 1, 0});

    return all ? 0 : 3;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact deformation-theory computations over windowed Cech models"};
    app.require_subcommand(1);

    std::string scenario_path;
    int window = 0;
    std::string format = "json";

    CLI::App* run = app.add_subcommand("run", "run the checks of a scenario file");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--window", window, "override the scenario window");
    run->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "text"}));

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "check a scenario file without running it");
    validate->add_option("scenario", validate_path, "scenario JSON file")->required();

    CLI::App* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            std::optional<int> w;
            if (window > 0)
                w = window;
            deform::ScenarioReport rep = deform::run_scenario(scenario_path, w);
            std::cout << (format == "text" ? rep.text : rep.json);
            return rep.pass ? 0 : 3;
        }
        if (validate->parsed()) {
            auto diags = deform::validate_scenario(validate_path);
            for (const auto& d : diags)
                std::cerr << d << "\n";
            if (diags.empty())
                std::cout << "ok\n";
            return diags.empty() ? 0 : 1;
        }
        if (selftest->parsed())
            return run_selftest();
    } catch (const deform::Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
