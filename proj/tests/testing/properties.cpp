// Copyright 2026 The vulnposture Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "testing/properties.hpp"

#include <algorithm>
#include <random>

#include "testing/oracle.hpp"
#include "testing/random_model.hpp"
#include "vulnposture/error.hpp"
#include "vulnposture/mutate.hpp"
#include "vulnposture/persistence.hpp"
#include "vulnposture/reasoner.hpp"
#include "vulnposture/validate.hpp"

namespace vulnposture::testing {
namespace {

constexpr std::size_t kMaxReported = 5;

void Fail(PropertyResult& r, std::uint64_t seed, int i, const std::string& what) {
  if (r.failures.size() < kMaxReported) {
    r.failures.push_back("seed " + std::to_string(seed) + " case " + std::to_string(i) +
                         ": " + what);
  }
}

template <typename Map>
EntityId Pick(const Map& map, std::mt19937_64& rng) {
  auto it = map.begin();
  std::advance(it, std::uniform_int_distribution<std::size_t>(0, map.size() - 1)(rng));
  return it->first;
}

template <typename Map>
IdSet Some(const Map& map, std::mt19937_64& rng, double p) {
  IdSet out;
  std::bernoulli_distribution coin(p);
  for (const auto& [id, _] : map) {
    if (coin(rng)) out.insert(id);
  }
  return out;
}

// Every (v, c) pair that is mitigated in `before` must stay mitigated in
// `after`.
void CompareMitigated(const DesignModel& before, const DesignModel& after,
                      PropertyResult& r, std::uint64_t seed, int i) {
  Reasoner rb(before);
  Reasoner ra(after);
  for (const auto& [c, _] : before.components) {
    for (const auto& [v, __] : before.vulnerabilities) {
      ++r.checks;
      if (rb.mitigated(v, c) && !ra.mitigated(v, c)) {
        Fail(r, seed, i, "Mitigated(" + v.str() + ", " + c.str() + ") went true -> false");
      }
    }
    const IdSet after_unmitigated = ra.vulnerable(c).unmitigated;
    const IdSet before_unmitigated = rb.vulnerable(c).unmitigated;
    const IdSet before_cvulns = rb.cvulns(c);
    for (const auto& v : after_unmitigated) {
      ++r.checks;
      if (before_cvulns.count(v) && !before_unmitigated.count(v)) {
        Fail(r, seed, i, "component " + c.str() + " regained unmitigated " + v.str());
      }
    }
  }
}

}  // namespace

PropertyResult check_oracle_equivalence(std::uint64_t seed, int models) {
  PropertyResult r;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < models; ++i, ++r.cases) {
    DesignModel m = random_model(rng);
    Reasoner reasoner(m);
    for (const auto& [c, _] : m.components) {
      for (const auto& [v, __] : m.vulnerabilities) {
        r.checks += 2;
        if (reasoner.mitigated_v(v, c) != oracle_witness(m, v, c)) {
          Fail(r, seed, i, "MitigatedV/witness differs for (" + v.str() + ", " + c.str() + ")");
        }
        if (reasoner.mitigated(v, c) != oracle_mitigated(m, v, c)) {
          Fail(r, seed, i, "Mitigated differs for (" + v.str() + ", " + c.str() + ")");
        }
      }
      ++r.checks;
      VulnerableResult got = reasoner.vulnerable(c);
      IdSet want;
      for (const auto& v : oracle_cvulns(m, c)) {
        if (!oracle_mitigated(m, v, c)) want.insert(v);
      }
      if (got.unmitigated != want || got.vulnerable != oracle_vulnerable(m, c)) {
        Fail(r, seed, i, "Vulnerable differs for " + c.str());
      }
    }

    PostureReport report = reasoner.check_design();
    ++r.checks;
    if (report.property_holds != oracle_property(m)) Fail(r, seed, i, "property differs");
    bool all_clear = true;
    for (const auto& entry : report.per_component) {
      r.checks += 3;
      all_clear = all_clear && !entry.vulnerable;
      if (entry.cvulns != oracle_cvulns(m, entry.component)) {
        Fail(r, seed, i, "cvulns differs for " + entry.component.str());
      }
      if (!std::includes(entry.cvulns.begin(), entry.cvulns.end(), entry.unmitigated.begin(),
                         entry.unmitigated.end()) ||
          entry.vulnerable != !entry.unmitigated.empty()) {
        Fail(r, seed, i, "inconsistent entry for " + entry.component.str());
      }
      for (const auto& v : entry.cvulns) {
        auto it = report.explanations.find({entry.component, v});
        if (it == report.explanations.end()) {
          Fail(r, seed, i, "missing explanation for " + v.str());
          continue;
        }
        if (auto defect = check_explanation(m, entry.component, it->second); !defect.empty()) {
          Fail(r, seed, i, "explanation for " + entry.component.str() + ": " + defect);
        }
      }
    }
    r.checks += 2;
    if (report.property_holds != all_clear) Fail(r, seed, i, "property is not the conjunction");
    if (report.per_component.size() != m.components.size()) {
      Fail(r, seed, i, "report does not list every component");
    }
    ++r.checks;
    if (!(reasoner.check_design() == report)) Fail(r, seed, i, "recomputed report differs");
  }
  return r;
}

PropertyResult check_control_monotonicity(std::uint64_t seed, int cases) {
  PropertyResult r;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cases;) {
    DesignModel m = random_model(rng);
    if (m.components.empty() || m.controls.empty()) continue;
    EntityId c = Pick(m.components, rng);
    EntityId s = Pick(m.controls, rng);
    if (m.components.at(c).controls.count(s)) continue;
    DesignModel after = mutate(m, Link{Relation::kComponentControl, c, s});
    CompareMitigated(m, after, r, seed, i);
    ++i;
    ++r.cases;
  }
  return r;
}

PropertyResult check_rule_monotonicity(std::uint64_t seed, int cases) {
  PropertyResult r;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cases;) {
    DesignModel m = random_model(rng);
    if (m.vulnerabilities.empty()) continue;
    Rule rule{EntityId("added_rule"), "added", Some(m.vulnerabilities, rng, 0.3),
              Some(m.component_types, rng, 0.4), Some(m.controls, rng, 0.3)};
    if (rule.rvulns.empty()) rule.rvulns.insert(Pick(m.vulnerabilities, rng));
    DesignModel after = mutate(m, Upsert{rule});
    CompareMitigated(m, after, r, seed, i);
    ++i;
    ++r.cases;
  }
  return r;
}

PropertyResult check_type_monotonicity(std::uint64_t seed, int cases) {
  PropertyResult r;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution fresh(0.4);
  for (int i = 0; i < cases;) {
    DesignModel m = random_model(rng);
    if (m.components.empty()) continue;
    EntityId c = Pick(m.components, rng);
    DesignModel after = m;
    EntityId t("added_type");
    if (m.component_types.empty() || fresh(rng)) {
      after = mutate(after, Upsert{ComponentType{t, "added", Some(m.vulnerabilities, rng, 0.4)}});
    } else {
      t = Pick(m.component_types, rng);
      if (m.components.at(c).types.count(t)) continue;
    }
    after = mutate(after, Link{Relation::kComponentType, c, t});
    Reasoner rb(m);
    Reasoner ra(after);
    for (const auto& [other, _] : m.components) {
      ++r.checks;
      IdSet before_set = rb.cvulns(other);
      IdSet after_set = ra.cvulns(other);
      if (!std::includes(after_set.begin(), after_set.end(), before_set.begin(),
                         before_set.end())) {
        Fail(r, seed, i, "cvulns(" + other.str() + ") shrank after adding " + t.str());
      }
      if (other != c && before_set != after_set) {
        Fail(r, seed, i, "cvulns(" + other.str() + ") changed though untouched");
      }
    }
    ++i;
    ++r.cases;
  }
  return r;
}

PropertyResult check_cycle_rejection(std::uint64_t seed, int injections) {
  PropertyResult r;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < injections;) {
    DesignModel m = random_model(rng);
    DesignModel cyclic = m;
    if (!inject_cycle(cyclic, rng)) continue;

    // The edge inject_cycle added, replayed through mutate.
    for (const auto& [id, v] : cyclic.vulnerabilities) {
      for (const auto& p : v.avulns) {
        if (m.vulnerabilities.at(id).avulns.count(p)) continue;
        ++r.checks;
        try {
          mutate(m, Link{Relation::kVulnerabilityParent, id, p});
          Fail(r, seed, i, "mutate accepted " + id.str() + " -> " + p.str());
        } catch (const Error& e) {
          if (e.code() != errc::kWouldCreateCycle) {
            Fail(r, seed, i, "mutate raised " + e.code() + " instead of would-create-cycle");
          }
        }
      }
    }

    r.checks += 3;
    if (!validate_model(cyclic).has_errors() || abstraction_cycles(cyclic).empty()) {
      Fail(r, seed, i, "validation missed the cycle");
    }
    try {
      Reasoner reasoner(cyclic);
      Fail(r, seed, i, "reasoner accepted a cyclic model");
    } catch (const Error& e) {
      if (e.code() != errc::kInvalidModel) Fail(r, seed, i, "reasoner raised " + e.code());
    }
    if (!parse_model(serialize_model(cyclic)).findings.has_errors()) {
      Fail(r, seed, i, "loading accepted a cyclic model");
    }
    ++i;
    ++r.cases;
  }
  return r;
}

PropertyResult check_mutation_closure(std::uint64_t seed, int models, int steps) {
  PropertyResult r;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < models; ++i) {
    DesignModel m = random_model(rng);
    for (int step = 0; step < steps; ++step, ++r.cases) {
      Change change = random_change(m, rng);
      const DesignModel snapshot = m;
      ++r.checks;
      try {
        m = mutate(m, change);
        if (validate_model(m).has_errors()) {
          Fail(r, seed, i, "accepted change at step " + std::to_string(step) +
                               " produced an invalid model");
          break;
        }
      } catch (const Error&) {
        if (!(m == snapshot)) Fail(r, seed, i, "rejected change modified the model");
      }
    }
  }
  return r;
}

}  // namespace vulnposture::testing
