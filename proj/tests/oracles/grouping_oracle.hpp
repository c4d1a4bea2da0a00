#pragma once

// Naive reference interpreter for hyperlink grouping. Deliberately shares no
// code with the library: groups are plain member lists, membership is found
// by linear scan and group sizes are recomputed from scratch on every use.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

struct Doc {
    std::string id;
    std::size_t tokens = 0;
    std::vector<std::string> links;
};

struct Group {
    std::vector<std::string> members;
    std::size_t created = 0;
};

inline bool has_doc(const std::vector<Doc>& docs, const std::string& id) {
    for (const auto& d : docs)
        if (d.id == id) return true;
    return false;
}

inline std::size_t tokens_of(const std::vector<Doc>& docs, const std::string& id) {
    for (const auto& d : docs)
        if (d.id == id) return d.tokens;
    return 0;
}

inline std::size_t group_size(const std::vector<Doc>& docs, const Group& g) {
    std::size_t total = 0;
    for (const auto& m : g.members) total += tokens_of(docs, m);
    return total;
}

// adj[d]: resolvable out-links, minus self, first occurrence only.
inline std::vector<std::string> related(const std::vector<Doc>& docs, const Doc& d) {
    std::vector<std::string> out;
    for (const auto& l : d.links) {
        if (l == d.id || !has_doc(docs, l)) continue;
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
    return out;
}

inline std::vector<std::vector<std::string>> group(const std::vector<Doc>& docs, std::size_t S) {
    std::vector<Doc> D = docs;
    std::stable_sort(D.begin(), D.end(), [&](const Doc& a, const Doc& b) {
        const auto da = related(docs, a).size();
        const auto db = related(docs, b).size();
        if (da != db) return da < db;
        return a.id < b.id;
    });

    std::vector<Group> G;
    std::size_t clock = 0;
    for (const auto& d : D) {
        std::vector<Group> related_groups;
        for (const auto& r : related(docs, d)) {
            for (const auto& g : G) {
                if (std::find(g.members.begin(), g.members.end(), r) == g.members.end()) continue;
                bool seen = false;
                for (const auto& x : related_groups) seen = seen || x.created == g.created;
                if (!seen) related_groups.push_back(g);
            }
        }
        Group g_new{{d.id}, clock++};
        std::stable_sort(related_groups.begin(), related_groups.end(),
                         [&](const Group& a, const Group& b) {
                             const auto sa = group_size(docs, a);
                             const auto sb = group_size(docs, b);
                             if (sa != sb) return sa < sb;
                             return a.created < b.created;
                         });
        for (const auto& g : related_groups) {
            if (group_size(docs, g_new) + group_size(docs, g) <= S) {
                for (const auto& m : g.members) g_new.members.push_back(m);
                for (std::size_t i = 0; i < G.size(); ++i) {
                    if (G[i].created == g.created) {
                        G.erase(G.begin() + static_cast<std::ptrdiff_t>(i));
                        break;
                    }
                }
            }
        }
        G.push_back(g_new);
    }

    std::vector<std::vector<std::string>> out;
    for (const auto& g : G) out.push_back(g.members);
    return out;
}

}  // namespace oracle
