#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tdr/json_io.hpp"

using namespace tdr;

namespace {

enum ExitCode { EXIT_OK = 0, EXIT_VERIFY_FAIL = 1, EXIT_INPUT = 2, EXIT_BUDGET = 3 };

std::string emit_mode = "pretty";

void print_table(const std::string& title, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows, Json machine) {
    if (emit_mode == "json") {
        std::cout << machine.dump(2) << "\n";
        return;
    }
    if (emit_mode == "csv") {
        std::ostringstream os;
        for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << "\n";
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << "\n";
        }
        std::cout << os.str();
        return;
    }
    std::cout << title << "\n";
    std::vector<size_t> width(header.size());
    for (size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& row : rows)
        for (size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    auto line = [&](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i) {
            std::cout << row[i];
            if (i + 1 < row.size()) std::cout << std::string(width[i] - row[i].size() + 2, ' ');
        }
        std::cout << "\n";
    };
    line(header);
    for (const auto& row : rows) line(row);
}

// ---------------------------------------------------------------------------
// fixture workspace
// ---------------------------------------------------------------------------

std::vector<int> find_sign_labeling_images(const GroupPresentation& pres) {
    // smallest nontrivial assignment of generators to Z/2 respecting relators
    if (pres.ngens > 20) throw BudgetExceeded("sign labeling search too large");
    for (long mask = 1; mask < (1L << pres.ngens); ++mask) {
        bool ok = true;
        for (const auto& rel : pres.relators) {
            int sum = 0;
            for (int letter : rel) sum += (mask >> (std::abs(letter) - 1)) & 1;
            if (sum % 2 != 0) { ok = false; break; }
        }
        if (ok) {
            std::vector<int> images(pres.ngens, 0);
            for (int g = 0; g < pres.ngens; ++g) images[g] = (mask >> g) & 1;
            return images;
        }
    }
    throw ValidationError("no nontrivial sign labeling exists");
}

Json fixture_workspace_json() {
    Json j;
    FiniteGroup triv = FiniteGroup::trivial();
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    FiniteGroup z3 = FiniteGroup::cyclic(3);
    FiniteGroup k4 = FiniteGroup::klein4();
    FiniteGroup s3 = FiniteGroup::symmetric(3);
    j["groups"]["trivial"] = group_to_json(triv);
    j["groups"]["z2"] = group_to_json(z2);
    j["groups"]["z3"] = group_to_json(z3);
    j["groups"]["z2xz2"] = group_to_json(k4);
    j["groups"]["s3"] = group_to_json(s3);

    std::map<std::string, FinSimplicialSet> spaces;
    spaces.emplace("pt", standard_simplex(0));
    spaces.emplace("delta1", standard_simplex(1));
    spaces.emplace("delta2", standard_simplex(2));
    spaces.emplace("circle", boundary_simplex(2));
    spaces.emplace("rp2", rp2_six());
    spaces.emplace("torus", torus_seven());
    for (const auto& [name, K] : spaces) j["spaces"][name] = space_to_json(K);

    // representations (named so they can appear as word leaves)
    j["representations"]["one_z2"] = representation_to_json(Representation::trivial(z2), "z2");
    j["representations"]["V-"] =
        representation_to_json(Representation::sign_of_cyclic2(z2), "z2");
    j["representations"]["Vr"] = representation_to_json(regular_representation(z2).rep, "z2");
    j["representations"]["one_trivial"] =
        representation_to_json(Representation::trivial(triv), "trivial");
    j["representations"]["one_s3"] = representation_to_json(Representation::trivial(s3), "s3");

    // labelings: trivial-group labelings for every space, Z/2 labelings where
    // the space carries a nontrivial sign class
    for (const auto& [name, K] : spaces) {
        GroupPresentation pres = fundamental_group_presentation(K);
        EdgeLabeling lab = edge_labeling_from_hom(K, pres, triv,
                                                  std::vector<int>(pres.ngens, 0));
        j["labelings"][name + "_trivial"] = labeling_to_json(lab, name, "trivial");
    }
    for (const std::string& name : {std::string("circle"), std::string("rp2"), std::string("torus")}) {
        const FinSimplicialSet& K = spaces.at(name);
        GroupPresentation pres = fundamental_group_presentation(K);
        std::vector<int> images;
        if (name == "rp2") {
            CosetEnumeration ce = coset_enumeration(pres);
            for (int g = 0; g < pres.ngens; ++g) images.push_back((int)ce.action[g][0]);
        } else {
            images = find_sign_labeling_images(pres);
        }
        EdgeLabeling lab = edge_labeling_from_hom(K, pres, z2, images);
        j["labelings"][name + "_z2"] = labeling_to_json(lab, name, "z2");
    }

    // local systems
    auto lsys = [&](const std::string& name, const std::string& lab, const std::string& rep) {
        j["local_systems"][name] = Json{{"labeling", lab}, {"representation", rep}};
    };
    lsys("pt_const", "pt_trivial", "one_trivial");
    lsys("delta1_const", "delta1_trivial", "one_trivial");
    lsys("delta2_const", "delta2_trivial", "one_trivial");
    lsys("circle_const", "circle_z2", "one_z2");
    lsys("circle_sign", "circle_z2", "V-");
    lsys("rp2_const", "rp2_z2", "one_z2");
    lsys("rp2_sign", "rp2_z2", "V-");
    lsys("torus_const", "torus_z2", "one_z2");
    lsys("torus_sign", "torus_z2", "V-");

    // cdgas
    PresentedGCdga M = rp2_minimal_cdga();
    j["cdgas"]["M"] = cdga_to_json(M, "z2");
    PresentedGCdga qz2(z2, {}, {}, std::vector<QMat>(2, QMat(0, 0)));
    j["cdgas"]["q_z2"] = cdga_to_json(qz2, "z2");
    std::vector<PresentedGCdga::Generator> xg = {{"x", 2}};
    PresentedGCdga s3x(s3, xg, {GPoly{}}, std::vector<QMat>(s3.size(), QMat::identity(1)));
    j["cdgas"]["s3_free_x2"] = cdga_to_json(s3x, "s3");
    std::vector<PresentedGCdga::Generator> yg = {{"y", 2}};
    PresentedGCdga freey(triv, yg, {GPoly{}}, {QMat::identity(1)});
    j["cdgas"]["free_x2"] = cdga_to_json(
        PresentedGCdga(triv, {{"x", 2}}, {GPoly{}}, {QMat::identity(1)}), "trivial");
    j["cdgas"]["free_y2"] = cdga_to_json(freey, "trivial");

    // homotopy candidates over free_x2 -> free_y2
    Json term_y = Json{{"coeff", "1"}, {"monomial", Json::array({Json::array({"y", 1})})}};
    Json pterm_y = Json{{"coeff", "1"},
                        {"monomial", Json::array({Json::array({"y", 1})})},
                        {"t", 0},
                        {"dt", 0}};
    Json term_2y = Json{{"coeff", "2"}, {"monomial", Json::array({Json::array({"y", 1})})}};
    j["homotopy_candidates"]["constant_good"] =
        Json{{"source", "free_x2"},
             {"target", "free_y2"},
             {"group_hom", Json{{"e", "e"}}},
             {"f1", Json{{"x", Json::array({term_y})}}},
             {"f2", Json{{"x", Json::array({term_y})}}},
             {"homotopy", Json{{"x", Json::array({pterm_y})}}}};
    j["homotopy_candidates"]["corrupted"] =
        Json{{"source", "free_x2"},
             {"target", "free_y2"},
             {"group_hom", Json{{"e", "e"}}},
             {"f1", Json{{"x", Json::array({term_y})}}},
             {"f2", Json{{"x", Json::array({term_2y})}}},
             {"homotopy", Json{{"x", Json::array({pterm_y})}}}};
    return j;
}

// ---------------------------------------------------------------------------
// homotopy candidate loader
// ---------------------------------------------------------------------------

PathAlgebraElt path_elt_from_json(const Json& terms, const PresentedGCdga& B) {
    PathAlgebraElt out;
    for (const auto& term : terms) {
        Rational c = Rational::parse(term.at("coeff").get<std::string>());
        GMonomial m{std::vector<int>(B.ngens(), 0)};
        for (const auto& factor : term.at("monomial")) {
            int idx = B.generator_index(factor[0].get<std::string>());
            m.exps[idx] += factor[1].get<int>();
        }
        int texp = term.value("t", 0);
        bool dt = term.value("dt", 0) != 0;
        FormMonomial fm{{texp}, dt ? std::vector<int>{1} : std::vector<int>{}};
        out.add(m, fm, c);
    }
    return out;
}

GcdgaMorphism morphism_from_json(const Json& j, const PresentedGCdga& A, const PresentedGCdga& B,
                                 const Json& group_hom) {
    GcdgaMorphism f;
    f.A = &A;
    f.B = &B;
    f.group_hom.assign(B.group().size(), -1);
    for (const auto& [hname, gname] : group_hom.items())
        f.group_hom[B.group().index_of(hname)] = A.group().index_of(gname.get<std::string>());
    for (int h = 0; h < B.group().size(); ++h)
        if (f.group_hom[h] < 0) throw ValidationError("group_hom missing an element image");
    f.images.assign(A.ngens(), GPoly{});
    for (const auto& [name, pj] : j.items()) {
        std::vector<PresentedGCdga::Generator> bgens = B.generators();
        f.images[A.generator_index(name)] = gpoly_from_json(pj, bgens);
    }
    f.validate();
    return f;
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int cmd_cohomology(const Workspace& ws, const std::string& space, const std::string& coeff,
                   int weight_cap) {
    const FinSimplicialSet& K = ws.space(space);
    const LocalSystem& L = ws.local_system(coeff);
    if (L.K != &K) throw ValidationError("local system '" + coeff + "' is not over '" + space + "'");
    StabilizationReport rep = adr_cohomology(K, L, weight_cap);

    std::vector<std::vector<std::string>> rows;
    Json machine;
    machine["space"] = space;
    machine["coefficients"] = coeff;
    machine["weight_cap"] = weight_cap;
    machine["stabilized"] = rep.stabilized;
    if (rep.stabilized) machine["stabilized_at"] = rep.stabilized_at;
    for (const auto& [w, dims] : rep.per_weight) {
        std::vector<std::string> row = {"w=" + std::to_string(w)};
        for (const auto& [deg, d] : dims) {
            row.push_back(std::to_string(d));
            machine["per_weight"][std::to_string(w)][std::to_string(deg)] = d;
        }
        rows.push_back(row);
    }
    std::vector<std::string> total_row = {"total"};
    for (const auto& [deg, d] : rep.totals) {
        total_row.push_back(std::to_string(d));
        machine["totals"][std::to_string(deg)] = d;
        machine["oracle"][std::to_string(deg)] = rep.oracle.at(deg);
    }
    rows.push_back(total_row);
    std::vector<std::string> header = {"weight"};
    for (const auto& [deg, d] : rep.totals) header.push_back("H^" + std::to_string(deg));
    print_table("cohomology of " + space + " with coefficients " + coeff, header, rows, machine);
    if (emit_mode == "pretty")
        std::cout << (rep.stabilized
                          ? "stabilized at weight " + std::to_string(rep.stabilized_at)
                          : "NOT stabilized at weight cap " + std::to_string(weight_cap))
                  << "\n";
    return rep.stabilized ? EXIT_OK : EXIT_VERIFY_FAIL;
}

int cmd_tdr_hom(const Workspace& ws, const std::string& space, const std::string& source,
                const std::string& target, int degree_bound, int weight_cap) {
    const FinSimplicialSet& K = ws.space(space);
    const LocalSystem& L = ws.local_system(source);
    const LocalSystem& Lp = ws.local_system(target);
    if (L.K != &K || Lp.K != &K)
        throw ValidationError("local systems must live over the requested space");
    LocalSystem H = ls_hom(L, Lp);
    StabilizationReport rep = adr_cohomology(K, H, weight_cap);

    std::vector<std::vector<std::string>> rows;
    Json machine;
    machine["space"] = space;
    machine["source"] = source;
    machine["target"] = target;
    machine["stabilized"] = rep.stabilized;
    for (const auto& [w, _] : rep.per_weight) {
        AdrWeightComplex wc = adr_weight_complex(K, H, w);
        std::vector<std::string> crow = {"w=" + std::to_string(w) + " cochain"};
        std::vector<std::string> hrow = {"w=" + std::to_string(w) + " H"};
        for (int qd = 0; qd <= degree_bound; ++qd) {
            long dim = qd < (int)wc.dims.size() ? wc.dims[qd] : 0;
            crow.push_back(std::to_string(dim));
            machine["cochain_dims"][std::to_string(w)][std::to_string(qd)] = dim;
            long hd = rep.per_weight.at(w).count(qd) ? rep.per_weight.at(w).at(qd) : 0;
            hrow.push_back(std::to_string(hd));
            machine["cohomology"][std::to_string(w)][std::to_string(qd)] = hd;
        }
        rows.push_back(crow);
        rows.push_back(hrow);
    }
    std::vector<std::string> total = {"H total"};
    for (int qd = 0; qd <= degree_bound; ++qd) {
        long t = rep.totals.count(qd) ? rep.totals.at(qd) : 0;
        total.push_back(std::to_string(t));
        machine["totals"][std::to_string(qd)] = t;
    }
    rows.push_back(total);
    std::vector<std::string> header = {"row"};
    for (int qd = 0; qd <= degree_bound; ++qd) header.push_back("deg " + std::to_string(qd));
    print_table("Hom_{TdR(" + space + ")}(" + source + ", " + target + ")", header, rows, machine);
    return rep.stabilized ? EXIT_OK : EXIT_VERIFY_FAIL;
}

int cmd_t_hom(const Workspace& ws, const std::string& cdga_name, const std::string& source,
              const std::string& target, int degree_bound) {
    const PresentedGCdga& A = ws.cdga(cdga_name);
    std::map<std::string, Representation> ctx = ws.rep_context(A.group());
    Word X = Word::parse(source), Y = Word::parse(target);
    InvariantComplex c = tc_hom(A, ctx, X, Y, degree_bound);
    auto h = c.cohomology();

    std::vector<std::vector<std::string>> rows(2);
    rows[0] = {"cochain dim"};
    rows[1] = {"H"};
    Json machine;
    machine["cdga"] = cdga_name;
    machine["source"] = source;
    machine["target"] = target;
    machine["degree_bound"] = degree_bound;
    for (int n = 0; n <= degree_bound; ++n) {
        rows[0].push_back(std::to_string(c.dim(n)));
        rows[1].push_back(std::to_string(h.at(n)));
        machine["cochain_dims"][std::to_string(n)] = c.dim(n);
        machine["cohomology"][std::to_string(n)] = h.at(n);
    }
    std::vector<std::string> header = {"row"};
    for (int n = 0; n <= degree_bound; ++n) header.push_back("deg " + std::to_string(n));
    print_table("Hom_{T(" + cdga_name + ")}(" + source + ", " + target + ")", header, rows,
                machine);
    return EXIT_OK;
}

int cmd_tannaka(const Workspace& ws, const std::string& group_name, long budget) {
    const FiniteGroup& G = ws.group(group_name);
    TannakaResult res = tensor_automorphisms(G, budget);
    Json machine;
    machine["group"] = group_name;
    machine["order"] = res.group.size();
    machine["abelian"] = res.group.is_abelian();
    machine["isomorphic_to_input"] = true; // tensor_automorphisms verifies or throws
    std::vector<std::vector<std::string>> rows = {
        {"order", std::to_string(res.group.size())},
        {"abelian", res.group.is_abelian() ? "yes" : "no"},
        {"isomorphic to input", "yes"},
    };
    print_table("tensor automorphisms of the fiber functor over " + group_name,
                {"property", "value"}, rows, machine);
    return EXIT_OK;
}

int cmd_verify(const Workspace& ws, const std::string& check, const std::string& cdga_name,
               const std::string& space, const std::string& labeling, const std::string& source,
               const std::string& target, const std::string& objects, const std::string& candidate,
               int degree_bound, int weight_cap) {
    Json machine;
    machine["check"] = check;
    bool ok = false;
    std::vector<std::vector<std::string>> rows;
    if (check == "regular-iso") {
        RegularIsoReport rep = regular_iso_check(ws.cdga(cdga_name), degree_bound);
        ok = rep.passed;
        machine["cdga"] = cdga_name;
        machine["degree_bound"] = degree_bound;
        for (const auto& [n, d] : rep.dims) {
            rows.push_back({"dim A^" + std::to_string(n), std::to_string(d)});
            machine["dims"][std::to_string(n)] = d;
        }
    } else if (check == "phi") {
        const FinSimplicialSet& K = ws.space(space);
        const EdgeLabeling& lab = ws.labeling(labeling);
        if (lab.K != &K) throw ValidationError("labeling is not over the requested space");
        PhiReport rep = phi_comparison(K, lab, ws.representation(source),
                                       ws.representation(target), degree_bound, weight_cap);
        ok = rep.passed;
        machine["space"] = space;
        for (const auto& [qw, d] : rep.dims) {
            std::string key = "q=" + std::to_string(qw.first) + ",w=" + std::to_string(qw.second);
            rows.push_back({key, std::to_string(d.first) + " = " + std::to_string(d.second)});
            machine["dims"][key] = Json::array({d.first, d.second});
        }
        for (const auto& f : rep.failures) machine["failures"].push_back(f);
    } else if (check == "pushout") {
        std::vector<Word> objs;
        std::stringstream ss(objects);
        std::string tok;
        while (std::getline(ss, tok, ';')) objs.push_back(Word::parse(tok));
        if (objs.empty()) throw ValidationError("pushout check needs --objects");
        const PresentedGCdga& A = ws.cdga(cdga_name);
        PushoutReport rep = pushout_square_check(A, ws.rep_context(A.group()), objs, degree_bound);
        ok = rep.passed;
        machine["cdga"] = cdga_name;
        machine["objects"] = objects;
        for (const auto& f : rep.failures) machine["failures"].push_back(f);
        rows.push_back({"pairs checked", std::to_string(objs.size() * objs.size())});
    } else if (check == "homotopy") {
        if (!ws.homotopy_candidates.contains(candidate))
            throw ValidationError("unknown homotopy candidate: '" + candidate + "'");
        const Json& cj = ws.homotopy_candidates.at(candidate);
        const PresentedGCdga& A = ws.cdga(cj.at("source").get<std::string>());
        const PresentedGCdga& B = ws.cdga(cj.at("target").get<std::string>());
        HomotopyCandidate cand{
            morphism_from_json(cj.at("f1"), A, B, cj.at("group_hom")),
            morphism_from_json(cj.at("f2"), A, B, cj.at("group_hom")),
            {}};
        cand.homotopy.assign(A.ngens(), PathAlgebraElt{});
        for (const auto& [name, terms] : cj.at("homotopy").items())
            cand.homotopy[A.generator_index(name)] = path_elt_from_json(terms, B);
        HomotopyReport rep = verify_right_homotopy(cand);
        ok = rep.homotopic;
        machine["candidate"] = candidate;
        machine["diagnostic"] = rep.diagnostic;
        rows.push_back({"diagnostic", rep.diagnostic});
    } else {
        throw ValidationError("unknown check: '" + check + "'");
    }
    machine["passed"] = ok;
    rows.insert(rows.begin(), {"result", ok ? "PASS" : "FAIL"});
    print_table("verify " + check, {"item", "value"}, rows, machine);
    return ok ? EXIT_OK : EXIT_VERIFY_FAIL;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic engine for twisted polynomial de Rham cohomology and "
                 "hom complexes of local-system dg-categories"};
    app.require_subcommand(1);

    std::string workspace_path, space, coeff, source, target, cdga_name, group_name, check,
        labeling, objects, candidate, out_path;
    int weight_cap = 8, degree_bound = 7;
    long budget = 24;

    app.add_option("--workspace", workspace_path, "workspace JSON file");
    app.add_option("--emit", emit_mode, "output format: pretty|json|csv")
        ->check(CLI::IsMember({"pretty", "json", "csv"}));

    auto* fixtures = app.add_subcommand("fixtures", "write the built-in fixture workspace");
    fixtures->add_option("--out", out_path, "output path")->required();

    auto* coh = app.add_subcommand("cohomology", "weight-stabilized de Rham cohomology");
    coh->add_option("--space", space)->required();
    coh->add_option("--coeff", coeff)->required();
    coh->add_option("--weight-cap", weight_cap);

    auto* th = app.add_subcommand("tdr-hom", "hom complex in the de Rham dg-category");
    th->add_option("--space", space)->required();
    th->add_option("--source", source)->required();
    th->add_option("--target", target)->required();
    th->add_option("--degree-bound", degree_bound);
    th->add_option("--weight-cap", weight_cap);

    auto* tah = app.add_subcommand("t-hom", "hom complex over an equivariant cdga");
    tah->add_option("--cdga", cdga_name)->required();
    tah->add_option("--source", source)->required();
    tah->add_option("--target", target)->required();
    tah->add_option("--degree-bound", degree_bound);

    auto* tan = app.add_subcommand("tannaka", "reconstruct a group from its fiber functor");
    tan->add_option("--group", group_name)->required();
    tan->add_option("--budget", budget);

    auto* ver = app.add_subcommand("verify", "run a named verification");
    ver->add_option("--check", check, "regular-iso|phi|pushout|homotopy")->required();
    ver->add_option("--cdga", cdga_name);
    ver->add_option("--space", space);
    ver->add_option("--labeling", labeling);
    ver->add_option("--source", source);
    ver->add_option("--target", target);
    ver->add_option("--objects", objects, "semicolon-separated words");
    ver->add_option("--candidate", candidate);
    ver->add_option("--degree-bound", degree_bound);
    ver->add_option("--weight-cap", weight_cap);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fixtures->parsed()) {
            std::ofstream out(out_path);
            if (!out) throw ValidationError("cannot open output file: " + out_path);
            out << fixture_workspace_json().dump(2) << "\n";
            return EXIT_OK;
        }
        if (workspace_path.empty()) throw ValidationError("--workspace is required");
        Workspace ws = load_workspace(workspace_path);
        if (coh->parsed()) return cmd_cohomology(ws, space, coeff, weight_cap);
        if (th->parsed()) return cmd_tdr_hom(ws, space, source, target, degree_bound, weight_cap);
        if (tah->parsed()) return cmd_t_hom(ws, cdga_name, source, target, degree_bound);
        if (tan->parsed()) return cmd_tannaka(ws, group_name, budget);
        if (ver->parsed())
            return cmd_verify(ws, check, cdga_name, space, labeling, source, target, objects,
                              candidate, degree_bound, weight_cap);
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return EXIT_BUDGET;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const InternalCheckFailure& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return EXIT_VERIFY_FAIL;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return EXIT_INPUT;
    }
    return EXIT_INPUT;
}
