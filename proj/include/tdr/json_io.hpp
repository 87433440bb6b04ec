#pragma once

#include <json.hpp>

#include <fstream>
#include <map>
#include <string>

#include "tdr/comparison.hpp"
#include "tdr/derham.hpp"
#include "tdr/gcdga.hpp"

namespace tdr {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// degeneracy words <-> epi maps
// ---------------------------------------------------------------------------

/// Word [j1, j2, ...] means s_{j1}(s_{j2}(...(target))); converts to the
/// underlying monotone surjection.
inline std::vector<int> epi_from_word(const std::vector<int>& word, int target_dim) {
    std::vector<int> e = identity_map(target_dim);
    int m = target_dim;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (*it < 0 || *it > m) throw ValidationError("degeneracy index out of range");
        e = compose_monotone(e, codegeneracy_map(*it, m));
        ++m;
    }
    return e;
}

inline std::vector<int> word_from_epi(std::vector<int> e) {
    std::vector<int> word;
    while (true) {
        long rep = -1;
        for (size_t i = 0; i + 1 < e.size(); ++i)
            if (e[i] == e[i + 1]) { rep = (long)i; break; }
        if (rep < 0) break;
        word.push_back((int)rep);
        e.erase(e.begin() + rep);
    }
    return word;
}

// ---------------------------------------------------------------------------
// Serializers
// ---------------------------------------------------------------------------

/// Form encoding: a list of {coeff, exps: [a1..ap], dts: [i1..iq]} monomials.
inline Json form_to_json(const PolyForm& f) {
    Json terms = Json::array();
    for (const auto& [m, c] : f.terms())
        terms.push_back(Json{{"coeff", c.str()}, {"exps", m.exps}, {"dts", m.dts}});
    return terms;
}

inline PolyForm form_from_json(const Json& j, int simplex_dim) {
    PolyForm f(simplex_dim);
    for (const auto& term : j)
        f = f + PolyForm::monomial(simplex_dim, term.at("exps").get<std::vector<int>>(),
                                   term.at("dts").get<std::vector<int>>(),
                                   Rational::parse(term.at("coeff").get<std::string>()));
    return f;
}

inline Json group_to_json(const FiniteGroup& g) {
    Json j;
    for (long i = 0; i < g.size(); ++i) j["elements"].push_back(g.name((int)i));
    j["table"] = g.table();
    return j;
}

inline FiniteGroup group_from_json(const Json& j) {
    std::vector<std::string> names = j.at("elements").get<std::vector<std::string>>();
    std::vector<std::vector<int>> table = j.at("table").get<std::vector<std::vector<int>>>();
    return FiniteGroup(std::move(names), std::move(table));
}

inline Json space_to_json(const FinSimplicialSet& K) {
    Json j;
    j["dim"] = K.top_dim();
    Json per_dim = Json::array();
    for (int d = 0; d <= K.top_dim(); ++d) per_dim.push_back(K.simplices(d));
    j["simplices"] = per_dim;
    Json faces = Json::object();
    for (int id = 0; id < K.count(); ++id) {
        int d = K.dim_of(id);
        if (d == 0) continue;
        Json list = Json::array();
        for (int i = 0; i <= d; ++i) {
            const SimplexRef& f = K.stored_face(id, i);
            list.push_back(Json{{"degeneracies", word_from_epi(f.epi)}, {"target", f.id}});
        }
        faces[std::to_string(id)] = list;
    }
    j["faces"] = faces;
    j["base"] = K.base_vertex();
    return j;
}

inline FinSimplicialSet space_from_json(const Json& j) {
    int top = j.at("dim").get<int>();
    std::vector<int> dim_of;
    const Json& per_dim = j.at("simplices");
    if ((int)per_dim.size() != top + 1)
        throw ValidationError("space JSON: simplices list must cover dimensions 0..dim");
    std::map<int, int> dims;
    int count = 0;
    for (int d = 0; d <= top; ++d)
        for (int id : per_dim[d].get<std::vector<int>>()) {
            if (dims.count(id)) throw ValidationError("space JSON: duplicate simplex id");
            dims[id] = d;
            ++count;
        }
    if (count == 0) throw ValidationError("space JSON: empty complex");
    dim_of.assign(count, -1);
    for (const auto& [id, d] : dims) {
        if (id < 0 || id >= count)
            throw ValidationError("space JSON: simplex ids must be 0..count-1");
        dim_of[id] = d;
    }
    std::vector<std::vector<SimplexRef>> faces(count);
    for (const auto& [key, list] : j.at("faces").items()) {
        int id = std::stoi(key);
        if (id < 0 || id >= count) throw ValidationError("space JSON: face key out of range");
        for (const auto& entry : list) {
            int target = entry.at("target").get<int>();
            std::vector<int> word = entry.at("degeneracies").get<std::vector<int>>();
            if (target < 0 || target >= count)
                throw ValidationError("space JSON: face target out of range");
            faces[id].push_back(SimplexRef{target, epi_from_word(word, dim_of[target])});
        }
    }
    return FinSimplicialSet(top, dim_of, faces, j.at("base").get<int>());
}

inline Json qmat_to_json(const QMat& m) {
    Json rows = Json::array();
    for (long r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (long c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).str());
        rows.push_back(row);
    }
    return rows;
}

inline QMat qmat_from_json(const Json& j) {
    long rows = (long)j.size();
    long cols = rows ? (long)j[0].size() : 0;
    QMat m(rows, cols);
    for (long r = 0; r < rows; ++r) {
        if ((long)j[r].size() != cols) throw ValidationError("ragged matrix in JSON");
        for (long c = 0; c < cols; ++c) m.at(r, c) = Rational::parse(j[r][c].get<std::string>());
    }
    return m;
}

inline Json representation_to_json(const Representation& rep, const std::string& group_name) {
    Json j;
    j["group"] = group_name;
    j["dim"] = rep.dim;
    Json mats = Json::object();
    for (int g = 0; g < rep.group.size(); ++g) mats[rep.group.name(g)] = qmat_to_json(rep.rho(g));
    j["matrices"] = mats;
    return j;
}

inline Representation representation_from_json(const Json& j, const FiniteGroup& group) {
    long dim = j.at("dim").get<long>();
    std::vector<QMat> mats(group.size(), QMat(dim, dim));
    for (const auto& [name, mj] : j.at("matrices").items())
        mats[group.index_of(name)] = qmat_from_json(mj);
    return Representation(group, dim, std::move(mats));
}

inline Json labeling_to_json(const EdgeLabeling& lab, const std::string& space_name,
                             const std::string& group_name) {
    Json j;
    j["space"] = space_name;
    j["group"] = group_name;
    Json edges = Json::object();
    for (const auto& [e, g] : lab.label) edges[std::to_string(e)] = lab.group.name(g);
    j["edges"] = edges;
    return j;
}

inline EdgeLabeling labeling_from_json(const Json& j, const FinSimplicialSet& K,
                                       const FiniteGroup& group) {
    EdgeLabeling lab;
    lab.K = &K;
    lab.group = group;
    for (const auto& [key, val] : j.at("edges").items()) {
        int e = std::stoi(key);
        int g = group.index_of(val.get<std::string>());
        if (g != group.identity()) lab.label[e] = g;
    }
    lab.validate();
    return lab;
}

inline Json gpoly_to_json(const PresentedGCdga& A, const GPoly& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p) {
        Json mono = Json::array();
        for (long i = 0; i < A.ngens(); ++i)
            if (m.exps[i] > 0) mono.push_back(Json::array({A.generators()[i].name, m.exps[i]}));
        terms.push_back(Json{{"coeff", c.str()}, {"monomial", mono}});
    }
    return terms;
}

inline GPoly gpoly_from_json(const Json& j, const std::vector<PresentedGCdga::Generator>& gens) {
    GPoly out;
    for (const auto& term : j) {
        Rational c = Rational::parse(term.at("coeff").get<std::string>());
        GMonomial m{std::vector<int>(gens.size(), 0)};
        for (const auto& factor : term.at("monomial")) {
            std::string name = factor[0].get<std::string>();
            int exp = factor[1].get<int>();
            long idx = -1;
            for (long i = 0; i < (long)gens.size(); ++i)
                if (gens[i].name == name) idx = i;
            if (idx < 0) throw ValidationError("polynomial references unknown generator");
            m.exps[idx] += exp;
        }
        gp_add_to(out, GPoly{{m, c}});
    }
    return out;
}

inline Json cdga_to_json(const PresentedGCdga& A, const std::string& group_name) {
    Json j;
    j["group"] = group_name;
    Json gens = Json::array();
    for (const auto& g : A.generators())
        gens.push_back(Json{{"name", g.name}, {"degree", g.degree}});
    j["generators"] = gens;
    Json diff = Json::object();
    for (long i = 0; i < A.ngens(); ++i)
        diff[A.generators()[i].name] = gpoly_to_json(A, A.d(A.generator_poly(i)));
    j["differential"] = diff;
    Json action = Json::object();
    for (int g = 0; g < A.group().size(); ++g) {
        Json per = Json::object();
        for (long i = 0; i < A.ngens(); ++i)
            per[A.generators()[i].name] = gpoly_to_json(A, A.act(g, A.generator_poly(i)));
        action[A.group().name(g)] = per;
    }
    j["action"] = action;
    return j;
}

inline PresentedGCdga cdga_from_json(const Json& j, const FiniteGroup& group) {
    std::vector<PresentedGCdga::Generator> gens;
    for (const auto& g : j.at("generators"))
        gens.push_back({g.at("name").get<std::string>(), g.at("degree").get<int>()});
    std::vector<GPoly> diff(gens.size());
    for (const auto& [name, pj] : j.at("differential").items()) {
        long idx = -1;
        for (long i = 0; i < (long)gens.size(); ++i)
            if (gens[i].name == name) idx = i;
        if (idx < 0) throw ValidationError("differential references unknown generator");
        diff[idx] = gpoly_from_json(pj, gens);
    }
    std::vector<QMat> action(group.size(), QMat((long)gens.size(), (long)gens.size()));
    for (const auto& [gname, per] : j.at("action").items()) {
        int g = group.index_of(gname);
        for (const auto& [name, pj] : per.items()) {
            long col = -1;
            for (long i = 0; i < (long)gens.size(); ++i)
                if (gens[i].name == name) col = i;
            if (col < 0) throw ValidationError("action references unknown generator");
            GPoly img = gpoly_from_json(pj, gens);
            for (const auto& [m, c] : img) {
                long row = -1;
                int ones = 0;
                for (long i = 0; i < (long)gens.size(); ++i) {
                    ones += m.exps[i];
                    if (m.exps[i] == 1) row = i;
                }
                if (ones != 1 || row < 0)
                    throw ValidationError("action images must be linear in the generators");
                action[g].at(row, col) = c;
            }
        }
    }
    return PresentedGCdga(group, std::move(gens), std::move(diff), std::move(action));
}

// ---------------------------------------------------------------------------
// Workspace: named objects with referential integrity
// ---------------------------------------------------------------------------

struct Workspace {
    std::map<std::string, FiniteGroup> groups;
    std::map<std::string, FinSimplicialSet> spaces;
    std::map<std::string, Representation> representations;
    std::map<std::string, std::string> representation_groups; // rep name -> group name
    std::map<std::string, EdgeLabeling> labelings;
    std::map<std::string, std::pair<std::string, std::string>> labeling_refs; // space, group
    std::map<std::string, LocalSystem> local_systems;
    std::map<std::string, PresentedGCdga> cdgas;
    std::map<std::string, std::string> cdga_groups;
    Json homotopy_candidates = Json::object();

    const FiniteGroup& group(const std::string& name) const {
        auto it = groups.find(name);
        if (it == groups.end()) throw ValidationError("unknown group: '" + name + "'");
        return it->second;
    }
    const FinSimplicialSet& space(const std::string& name) const {
        auto it = spaces.find(name);
        if (it == spaces.end()) throw ValidationError("unknown space: '" + name + "'");
        return it->second;
    }
    const Representation& representation(const std::string& name) const {
        auto it = representations.find(name);
        if (it == representations.end())
            throw ValidationError("unknown representation: '" + name + "'");
        return it->second;
    }
    const EdgeLabeling& labeling(const std::string& name) const {
        auto it = labelings.find(name);
        if (it == labelings.end()) throw ValidationError("unknown labeling: '" + name + "'");
        return it->second;
    }
    const LocalSystem& local_system(const std::string& name) const {
        auto it = local_systems.find(name);
        if (it == local_systems.end())
            throw ValidationError("unknown local system: '" + name + "'");
        return it->second;
    }
    const PresentedGCdga& cdga(const std::string& name) const {
        auto it = cdgas.find(name);
        if (it == cdgas.end()) throw ValidationError("unknown cdga: '" + name + "'");
        return it->second;
    }

    /// Representations over a cdga's group, for word evaluation.
    std::map<std::string, Representation> rep_context(const FiniteGroup& g) const {
        std::map<std::string, Representation> ctx;
        for (const auto& [name, rep] : representations)
            if (rep.group.table() == g.table()) ctx.emplace(name, rep);
        return ctx;
    }
};

inline Workspace workspace_from_json(const Json& j) {
    Workspace ws;
    if (j.contains("groups"))
        for (const auto& [name, gj] : j.at("groups").items()) ws.groups.emplace(name, group_from_json(gj));
    if (j.contains("spaces"))
        for (const auto& [name, sj] : j.at("spaces").items()) ws.spaces.emplace(name, space_from_json(sj));
    if (j.contains("representations"))
        for (const auto& [name, rj] : j.at("representations").items()) {
            std::string gname = rj.at("group").get<std::string>();
            ws.representations.emplace(name, representation_from_json(rj, ws.group(gname)));
            ws.representation_groups[name] = gname;
        }
    if (j.contains("labelings"))
        for (const auto& [name, lj] : j.at("labelings").items()) {
            std::string sname = lj.at("space").get<std::string>();
            std::string gname = lj.at("group").get<std::string>();
            ws.labelings.emplace(name, labeling_from_json(lj, ws.space(sname), ws.group(gname)));
            ws.labeling_refs[name] = {sname, gname};
        }
    if (j.contains("local_systems"))
        for (const auto& [name, lj] : j.at("local_systems").items()) {
            std::string lab = lj.at("labeling").get<std::string>();
            std::string rep = lj.at("representation").get<std::string>();
            const EdgeLabeling& labeling = ws.labeling(lab);
            ws.local_systems.emplace(name, local_system_from_rep(*labeling.K, labeling,
                                                                 ws.representation(rep)));
        }
    if (j.contains("cdgas"))
        for (const auto& [name, cj] : j.at("cdgas").items()) {
            std::string gname = cj.at("group").get<std::string>();
            ws.cdgas.emplace(name, cdga_from_json(cj, ws.group(gname)));
            ws.cdga_groups[name] = gname;
        }
    if (j.contains("homotopy_candidates")) ws.homotopy_candidates = j.at("homotopy_candidates");
    return ws;
}

inline Workspace load_workspace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open workspace file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("workspace JSON parse error: ") + e.what());
    }
    return workspace_from_json(j);
}

} // namespace tdr
