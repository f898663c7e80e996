#include "mvcheck/enumerate.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace mvcheck {

std::string Bounds::str() const {
  return "max-objects=" + std::to_string(maxObjectsPerClass) +
         " depth=" + std::to_string(depth) +
         " queue-depth=" + std::to_string(queueDepth) +
         " max-states=" + std::to_string(maxStates);
}

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = (char)std::tolower((unsigned char)c);
  return s;
}

// All attribute valuations of one class, in a stable order.
std::vector<std::map<std::string, Value>> class_valuations(
    const ClassModel& m, const std::string& cls) {
  std::vector<std::map<std::string, Value>> out{{}};
  for (const auto& a : m.all_attrs(cls)) {
    std::vector<std::map<std::string, Value>> next;
    for (const auto& base : out)
      for (const auto& v : type_values(a.type)) {
        auto ext = base;
        ext[a.name] = v;
        next.push_back(std::move(ext));
      }
    out = std::move(next);
  }
  return out;
}

// Multisets of size n drawn from 0..k-1 as non-decreasing index tuples.
void multisets(int n, int k, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if ((int)cur.size() == n) {
    out.push_back(cur);
    return;
  }
  int start = cur.empty() ? 0 : cur.back();
  for (int i = start; i < k; ++i) {
    cur.push_back(i);
    multisets(n, k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::string canonical_key_fixed(const Snapshot& s,
                                const std::set<std::string>& fixed) {
  // Group free objects per class and minimize the encoding over all
  // per-class permutations, keeping fixed identities in place.
  std::map<std::string, std::vector<std::string>> freeByClass;
  for (const auto& [id, st] : s.objects)
    if (!fixed.count(id)) freeByClass[st.cls].push_back(id);

  std::vector<std::pair<std::string, std::vector<std::string>>> groups(
      freeByClass.begin(), freeByClass.end());
  std::string best;

  std::map<std::string, std::string> rename;
  for (const auto& id : fixed)
    if (s.objects.count(id)) rename[id] = id;

  // recursive permutation product
  std::function<void(size_t)> rec = [&](size_t gi) {
    if (gi == groups.size()) {
      Snapshot r;
      for (const auto& [id, st] : s.objects) r.objects[rename[id]] = st;
      for (const auto& [assoc, ls] : s.links) {
        auto& out = r.links[assoc];
        for (const auto& [x, y] : ls) out.insert({rename[x], rename[y]});
      }
      std::string enc = r.encode();
      if (best.empty() || enc < best) best = enc;
      return;
    }
    std::vector<std::string> ids = groups[gi].second;
    std::sort(ids.begin(), ids.end());
    do {
      for (size_t i = 0; i < ids.size(); ++i)
        rename[ids[i]] = "~" + lower(groups[gi].first) + "_" +
                         std::to_string(i + 1);
      rec(gi + 1);
    } while (std::next_permutation(ids.begin(), ids.end()));
  };
  rec(0);
  return best;
}

std::vector<Snapshot> enumerate_snapshots(const ClassModel& m, const Bounds& b,
                                          const Snapshot& anchor) {
  // Per class: how many anchored objects, how many extras may be added.
  struct ClassSpace {
    std::string cls;
    int anchored = 0;
    std::vector<std::map<std::string, Value>> valuations;
  };
  std::vector<ClassSpace> spaces;
  for (const auto& c : m.classes) {
    ClassSpace cs;
    cs.cls = c.name;
    for (const auto& [id, st] : anchor.objects)
      if (st.cls == c.name) ++cs.anchored;
    if (cs.anchored > b.maxObjectsPerClass) return {};  // anchor over bound
    cs.valuations = class_valuations(m, c.name);
    spaces.push_back(std::move(cs));
  }

  // Choose an extra-object multiset of valuations for every class.
  std::vector<Snapshot> bases{anchor};
  for (const auto& cs : spaces) {
    int room = b.maxObjectsPerClass - cs.anchored;
    if (room < 0) room = 0;
    std::vector<std::vector<std::vector<int>>> perCount;  // [n] -> multisets
    for (int n = 0; n <= room; ++n) {
      std::vector<std::vector<int>> ms;
      std::vector<int> cur;
      multisets(n, (int)cs.valuations.size(), cur, ms);
      perCount.push_back(std::move(ms));
    }
    std::vector<Snapshot> next;
    for (const auto& base : bases) {
      for (int n = 0; n <= room; ++n) {
        for (const auto& pick : perCount[n]) {
          Snapshot s = base;
          for (int i = 0; i < n; ++i) {
            // pick a free id not colliding with anchor identities
            std::string id;
            int k = 1;
            do {
              id = lower(cs.cls) + "_" + std::to_string(k++);
            } while (s.objects.count(id));
            s.objects[id] = {cs.cls, cs.valuations[pick[i]]};
          }
          next.push_back(std::move(s));
        }
      }
    }
    bases = std::move(next);
  }

  // Extend every base with optional links (anchored links stay).
  std::vector<Snapshot> candidates;
  for (const auto& base : bases) {
    std::vector<std::tuple<std::string, std::string, std::string>> optional;
    for (const auto& a : m.assocs) {
      auto as = base.objects_of_class(m, a.a.cls);
      auto bs = base.objects_of_class(m, a.b.cls);
      auto it = base.links.find(a.name);
      for (const auto& x : as)
        for (const auto& y : bs) {
          bool present =
              it != base.links.end() && it->second.count({x, y}) > 0;
          if (!present) optional.emplace_back(a.name, x, y);
        }
    }
    size_t combos = (size_t)1 << std::min<size_t>(optional.size(), 20);
    if (optional.size() > 20) combos = (size_t)1 << 20;  // defensive cap
    for (size_t mask = 0; mask < combos; ++mask) {
      Snapshot s = base;
      for (size_t i = 0; i < optional.size(); ++i)
        if (mask & ((size_t)1 << i)) {
          const auto& [an, x, y] = optional[i];
          s.links[an].insert({x, y});
        }
      candidates.push_back(std::move(s));
    }
  }

  // Filter to conformant snapshots, quotient by isomorphism (anchor rigid),
  // and order the stream deterministically.
  std::set<std::string> fixed;
  for (const auto& [id, _] : anchor.objects) fixed.insert(id);
  std::map<std::string, Snapshot> byKey;  // key -> representative
  for (auto& s : candidates) {
    if (!conforms(s, m)) continue;
    std::string key =
        std::to_string(s.objects.size()) + "#" + canonical_key_fixed(s, fixed);
    // pad the size for lexicographic = numeric order on small counts
    key = std::string(6 - std::min<size_t>(6, key.find('#')), '0') + key;
    if (!byKey.count(key)) byKey[key] = std::move(s);
  }
  std::vector<Snapshot> out;
  out.reserve(byKey.size());
  for (auto& [_, s] : byKey) out.push_back(std::move(s));
  return out;
}

}  // namespace mvcheck
