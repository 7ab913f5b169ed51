// Command-line driver: heights, entropy, norm, distance, sweep-s2, regimes.
// Exit codes: 0 success, 1 numeric failure, 2 usage/parse error.

#include "shiftmetric/entropy.hpp"
#include "shiftmetric/errors.hpp"
#include "shiftmetric/json_io.hpp"
#include "shiftmetric/metric.hpp"
#include "shiftmetric/parallel.hpp"
#include "shiftmetric/polynomial.hpp"
#include "shiftmetric/shiftlocus.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

namespace sm = shiftmetric;
using nlohmann::json;

namespace {

// Comma list with log<x> and inf tokens, or a JSON array with "inf" strings.
std::vector<double> parse_number_list(const std::string& text) {
    if (!text.empty() && text.front() == '[')
        return sm::lengths_from_json(nlohmann::json::parse(text), nullptr);
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty())
            continue;
        if (tok == "inf") {
            out.push_back(std::numeric_limits<double>::infinity());
        } else if (tok.rfind("log", 0) == 0) {
            out.push_back(std::log(std::stod(tok.substr(3))));
        } else {
            out.push_back(std::stod(tok));
        }
    }
    if (out.empty())
        throw sm::DomainError("empty number list '" + text + "'");
    return out;
}

void write_output(const std::string& outPath, const std::string& text) {
    if (outPath.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(outPath, std::ios::binary);
    if (!f)
        throw sm::DomainError("cannot open output file '" + outPath + "'");
    f << text;
}

int cmd_heights(const std::string& polyArg, double tol, int maxIter, double eps,
                const std::string& outPath) {
    const sm::Polynomial f = sm::polynomial_from_json(sm::load_json_arg(polyArg));
    (void)maxIter;
    const sm::CriticalHeights h = sm::critical_heights(f, tol);
    const bool shift = sm::is_shift_locus(h, eps);
    json out = {
        {"heights", sm::heights_to_json(h)},
        {"shiftLocus", shift},
        {"generic", shift && sm::is_generic(h, f.degree)},
    };
    if (!shift)
        out["note"] = "not shift locus";
    write_output(outPath, out.dump() + "\n");
    return 0;
}

int cmd_entropy(const std::string& lengthsText, const std::string& method,
                double injectBias, const std::string& outPath) {
    const auto vals = parse_number_list(lengthsText);
    bool extended = false;
    for (double v : vals)
        extended = extended || std::isinf(v);
    const sm::LengthFunction l = sm::rose_lengths(vals, extended);

    double value = 0.0;
    if (method == "closed" || method == "spectral" || method == "det") {
        const sm::EntropyMethod m = method == "closed" ? sm::EntropyMethod::Closed
                                    : method == "det" ? sm::EntropyMethod::Det
                                                      : sm::EntropyMethod::Spectral;
        value = sm::entropy(l, m) + (method == "closed" ? injectBias : 0.0);
    } else if (method == "all") {
        const double closed = sm::entropy(l, sm::EntropyMethod::Closed) + injectBias;
        const double spectral = sm::entropy(l, sm::EntropyMethod::Spectral);
        const double det = sm::entropy(l, sm::EntropyMethod::Det);
        const double spread = std::max({closed, spectral, det}) -
                              std::min({closed, spectral, det});
        if (spread > 1e-6) {
            std::cerr << "entropy methods disagree beyond 1e-6:\n"
                      << "  closed   = " << sm::format_g17(closed) << "\n"
                      << "  spectral = " << sm::format_g17(spectral) << "\n"
                      << "  det      = " << sm::format_g17(det) << "\n";
            return 1;
        }
        value = closed;
    } else {
        throw sm::DomainError("unknown method '" + method + "'");
    }
    write_output(outPath, sm::format_g17(value) + "\n");
    return 0;
}

int cmd_norm(const std::string& lengthsText, const std::string& vectorText,
             const std::string& outPath) {
    const auto vals = parse_number_list(lengthsText);
    const auto vec = parse_number_list(vectorText);
    if (vec.size() != vals.size())
        throw sm::DomainError("--vector must match --lengths in size");
    bool extended = false;
    for (double v : vals)
        extended = extended || std::isinf(v);
    const sm::LengthFunction lhat =
        sm::normalize_unit_entropy(sm::rose_lengths(vals, extended));
    const auto tangent = sm::project_tangent(lhat, vec);
    const double n2 = sm::entropy_norm_sq(lhat, tangent);
    json out = {
        {"normSq", n2},
        {"norm", std::sqrt(std::max(n2, 0.0))},
        {"lengthsUnitEntropy", sm::lengths_to_json(lhat.values())},
        {"tangent", tangent},
    };
    write_output(outPath, out.dump() + "\n");
    return 0;
}

int cmd_distance(const std::string& aText, const std::string& bText,
                 const std::string& twistAText, const std::string& twistBText,
                 int refine, const std::string& outPath) {
    const sm::CriticalHeights hA(parse_number_list(aText));
    const sm::CriticalHeights hB(parse_number_list(bText));
    std::optional<std::vector<double>> tA, tB;
    if (!twistAText.empty())
        tA = parse_number_list(twistAText);
    if (!twistBText.empty())
        tB = parse_number_list(twistBText);
    sm::RhoOptions opt;
    opt.refinement = refine;
    const sm::RhoResult r = sm::rho_upper(hA, hB, tA, tB, opt);
    json out = {
        {"upperBound", r.upperBound},
        {"tag", r.tag},
        {"stagnated", r.stagnated},
        {"refinement", refine},
    };
    write_output(outPath, out.dump() + "\n");
    return 0;
}

// Radius of the level curve G_{z^2+c}(0) = h along the ray of angle theta.
double level_radius(double h, double theta, double tol, int maxIter) {
    const auto green0 = [&](double r) {
        const sm::Polynomial f(2, {std::complex<double>(r * std::cos(theta),
                                                        r * std::sin(theta))});
        return sm::green_function(f, 0.0, tol, maxIter);
    };
    double lo = 1e-9, hi = std::max(8.0, 8.0 * std::exp(2.0 * h));
    if (green0(lo) > h)
        throw sm::SolverError("level tracing: inner bracket already above level");
    if (green0(hi) < h)
        throw sm::SolverError("level tracing: outer bracket below level");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (green0(mid) < h)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 * hi)
            break;
    }
    return 0.5 * (lo + hi);
}

int cmd_sweep_s2(const std::string& levelsText, int samples, double tol, int maxIter,
                 const std::string& outPath) {
    const auto levels = parse_number_list(levelsText);
    for (double h : levels)
        if (!(h > 0.0))
            throw sm::DomainError("levels must be positive");
    if (samples < 8)
        throw sm::DomainError("need at least 8 samples per level");

    std::ostringstream csv;
    csv << "h,length,samples\n";
    for (double h : levels) {
        // trace the level curve at `samples` angles
        std::vector<int> ok(samples, 0);
        sm::parallel_for(samples, [&](std::size_t i) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / samples;
            try {
                (void)level_radius(h, theta, tol, maxIter);
                ok[i] = 1;
            } catch (const sm::Error&) {
                ok[i] = 0;
            }
        });
        int traced = 0;
        int pairs = 0;
        for (int i = 0; i < samples; ++i) {
            traced += ok[i];
            if (ok[i] && ok[(i + 1) % samples])
                ++pairs;
        }
        if (traced < samples)
            std::cerr << "level " << h << ": " << (samples - traced)
                      << " samples failed to trace\n";

        // Heights are constant on the level set, so consecutive samples
        // differ by a twist; one loop sweeps the twist coordinate through
        // its full period 2.  All chords are congruent, so the estimate is
        // pairs * (one chord).
        const sm::CriticalHeights heights({h});
        const std::vector<double> from = {0.0};
        const std::vector<double> to = {2.0 / samples};
        const double chord =
            sm::segment_entropy_length(sm::twist_segment(heights, from, to));
        const double estimate = chord * pairs;
        csv << sm::format_g17(h) << ',' << sm::format_g17(estimate) << ',' << traced
            << "\n";
    }
    write_output(outPath, csv.str());
    return 0;
}

int cmd_regimes(const std::string& familyArg, const std::string& kgridText,
                const std::string& outPath, const std::string& jsonPath) {
    sm::SequenceFamily fam = sm::family_from_json(sm::load_json_arg(familyArg));
    if (!kgridText.empty())
        fam.kGrid = parse_number_list(kgridText);
    if (fam.kGrid.size() < 4)
        throw sm::DomainError("regimes need a kGrid with at least 4 probes");

    const auto idx = sm::index_set(fam, fam.kGrid);
    const auto asym = sm::entropy_asymptotics(fam, fam.kGrid);
    const auto cauchy = sm::cauchy_probe(fam, fam.kGrid);

    std::ostringstream csv;
    csv << "k";
    for (int j = 1; j < fam.D; ++j)
        csv << ",h" << j;
    csv << ",entropy,predicted_rate,entropy_ratio,leg_length,tail_sum\n";
    for (std::size_t p = 0; p < fam.kGrid.size(); ++p) {
        csv << sm::format_g17(fam.kGrid[p]);
        const auto h = fam.at(fam.kGrid[p]);
        for (int j = 0; j < fam.D - 1; ++j)
            csv << ',' << sm::format_g17(h[j]);
        csv << ',' << sm::format_g17(asym.entropies[p]);
        csv << ',' << sm::format_g17(asym.predictedRates[p]);
        csv << ',' << sm::format_g17(asym.ratios[p]);
        if (p < cauchy.legLengths.size()) {
            csv << ',' << sm::format_g17(cauchy.legLengths[p]) << ','
                << sm::format_g17(cauchy.tailSums[p]);
        } else {
            csv << ",,";
        }
        csv << "\n";
    }
    write_output(outPath, csv.str());

    json indexSet1Based = json::array();
    for (int j : idx.indexSet)
        indexSet1Based.push_back(j + 1);
    json summary = {
        {"regime", fam.regime},
        {"caseTag", asym.caseTag},
        {"rateFormula", asym.rateFormula},
        {"comparabilityC", asym.comparabilityC},
        {"asymptoticsPass", asym.pass},
        {"indexSet", indexSet1Based},
        {"singular", idx.singular},
        {"degenerating", idx.degenerating},
        {"uniformlyDivergent", idx.uniformlyDivergent},
        {"cauchyConsistent", cauchy.cauchyConsistent},
        {"decayRatio", cauchy.decayRatio},
        {"classification",
         cauchy.cauchyConsistent ? "Cauchy-consistent" : "divergent-consistent"},
    };
    const std::string summaryText = summary.dump() + "\n";
    if (!jsonPath.empty())
        write_output(jsonPath, summaryText);
    else
        std::cout << summaryText;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy metrics on the polynomial shift locus"};
    app.require_subcommand(1);

    std::string polyArg, outPath, jsonPath;
    std::string lengthsText, vectorText, method = "all";
    std::string heightsAText, heightsBText, twistAText, twistBText;
    std::string levelsText = "0.05,1,20", familyArg, kgridText;
    double tol = 1e-9, eps = 1e-12, injectBias = 0.0;
    int maxIter = 2048, refine = 1, samples = 256;
    long seed = 0;

    auto addCommon = [&](CLI::App* sub) {
        sub->add_option("--tol", tol, "numeric tolerance");
        sub->add_option("--max-iter", maxIter, "iteration cap for escape orbits");
        sub->add_option("--out", outPath, "output file (default stdout)");
        sub->add_option("--seed", seed, "seed for randomized sweeps");
    };

    CLI::App* heights = app.add_subcommand("heights", "critical heights of a polynomial");
    heights->add_option("poly", polyArg, "polynomial JSON (inline or file)")->required();
    heights->add_option("--eps", eps, "shift-locus positivity threshold");
    addCommon(heights);

    CLI::App* entropyCmd = app.add_subcommand("entropy", "entropy of a rose length function");
    entropyCmd->add_option("--lengths", lengthsText, "comma list; log<x> and inf allowed")
        ->required();
    entropyCmd->add_option("--method", method, "closed|spectral|det|all");
    entropyCmd->add_option("--inject-bias", injectBias,
                           "testing aid: bias added to the closed method");
    addCommon(entropyCmd);

    CLI::App* norm = app.add_subcommand("norm", "entropy metric norm of a tangent vector");
    norm->add_option("--lengths", lengthsText)->required();
    norm->add_option("--vector", vectorText, "components; projected to the tangent space")
        ->required();
    addCommon(norm);

    CLI::App* distance = app.add_subcommand("distance", "rho_D upper bound between heights");
    distance->add_option("--heightsA", heightsAText)->required();
    distance->add_option("--heightsB", heightsBText)->required();
    distance->add_option("--twistA", twistAText);
    distance->add_option("--twistB", twistBText);
    distance->add_option("--refine", refine, "control points for the height polygon");
    addCommon(distance);

    CLI::App* sweep = app.add_subcommand("sweep-s2", "level-curve length estimates in S_2");
    sweep->add_option("--levels", levelsText, "escape-rate levels");
    sweep->add_option("--samples", samples, "samples per level");
    addCommon(sweep);

    CLI::App* regimes = app.add_subcommand("regimes", "sequence-family regime report");
    regimes->add_option("--family", familyArg, "family JSON (inline or file)")->required();
    regimes->add_option("--kgrid", kgridText, "overrides the family's kGrid");
    regimes->add_option("--json", jsonPath, "write the summary JSON here");
    addCommon(regimes);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*heights)
            return cmd_heights(polyArg, tol, maxIter, eps, outPath);
        if (*entropyCmd)
            return cmd_entropy(lengthsText, method, injectBias, outPath);
        if (*norm)
            return cmd_norm(lengthsText, vectorText, outPath);
        if (*distance)
            return cmd_distance(heightsAText, heightsBText, twistAText, twistBText,
                                refine, outPath);
        if (*sweep)
            return cmd_sweep_s2(levelsText, samples, tol, maxIter, outPath);
        if (*regimes)
            return cmd_regimes(familyArg, kgridText, outPath, jsonPath);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const sm::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sm::Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
