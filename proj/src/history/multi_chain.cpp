#include "moments/history/multi_chain.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

namespace moments {

bool Strand::covers(TimeIndex t) const {
  if (t == start) return true;
  return std::any_of(links.begin(), links.end(), [&](const Link& l) { return l.to() == t; });
}

namespace {

using Vec = Eigen::VectorXcd;

constexpr double kBranchCutoff = 1e-30;
constexpr double kImpossibleWeight = 1e-13;
constexpr double kNegligibleProbability = 1e-14;

struct IndexedOp {
  Op::Matrix matrix;
  SubsystemIndex index;
};

Vec apply_indexed(const IndexedOp& op, const Vec& in) {
  Vec out(in.size());
  const auto sub = static_cast<Eigen::Index>(op.index.offsets.size());
  Vec gathered(sub);
  Vec mapped(sub);
  for (std::size_t base : op.index.bases) {
    for (Eigen::Index j = 0; j < sub; ++j) gathered(j) = in(static_cast<Eigen::Index>(base + op.index.offsets[j]));
    mapped.noalias() = op.matrix * gathered;
    for (Eigen::Index j = 0; j < sub; ++j) out(static_cast<Eigen::Index>(base + op.index.offsets[j])) = mapped(j);
  }
  return out;
}

struct Step {
  enum class Kind { unitary, conditioning, branch };
  Kind kind = Kind::unitary;
  std::vector<std::pair<double, IndexedOp>> ops;
  std::size_t slot = 0;
};

struct PointerSlot {
  std::size_t stride;
  std::size_t dimension;
  int half;
};

struct Program {
  RegisterLayout layout;
  Vec initial;
  std::vector<Step> steps;
  std::vector<IndexedOp> posts;
  std::size_t recorded = 0;
  std::vector<PointerSlot> pointers;
  std::vector<std::string> labels;
};

IndexedOp index_op(const RegisterLayout& layout, const Op& op) {
  std::vector<std::size_t> targets;
  for (const auto& r : op.layout()) {
    const std::size_t i = layout.index_of(r.name);
    if (layout[i].dimension != r.dimension) {
      throw LayoutError("operator on '" + r.name + "' has dimension " + std::to_string(r.dimension) +
                        ", register has " + std::to_string(layout[i].dimension));
    }
    targets.push_back(i);
  }
  return {op.matrix(), subsystem_index(layout, targets)};
}

const Strand& find_strand(const MultiSystemChain& chain, const std::string& name) {
  for (const auto& s : chain.strands) {
    if (s.name == name) return s;
  }
  throw LayoutError("unknown strand '" + name + "'");
}

Op on_strand(const Op& op, const Strand& strand, const char* what) {
  if (op.layout().size() != 1 || op.dimension() != strand.dimension) {
    throw LayoutError(std::string(what) + " on strand '" + strand.name + "' must act on one register of dimension " +
                      std::to_string(strand.dimension));
  }
  return op.on(strand.name);
}

void require_covered(const Strand& strand, TimeIndex at, const char* what) {
  if (!strand.covers(at)) {
    throw ValueError(std::string(what) + " at " + to_string(at) + " but strand '" + strand.name +
                     "' has no such moment");
  }
}

Program compile(const MultiSystemChain& chain) {
  Program prog;

  for (const auto& s : chain.strands) {
    TimeIndex cursor = s.start;
    for (const auto& link : s.links) {
      if (link.from() != cursor) {
        throw ValueError("strand '" + s.name + "': link " + to_string(link.from()) + " -> " + to_string(link.to()) +
                         " does not continue from " + to_string(cursor));
      }
      cursor = link.to();
    }
  }

  // Register layout: preparations in order, then pointers.
  std::vector<Register> regs;
  std::map<std::string, int> covered;
  for (const auto& prep : chain.preparations) {
    if (!prep.is_normalized(1e-10)) throw ValueError("preparation state must be normalized");
    for (const auto& r : prep.layout()) {
      const Strand& s = find_strand(chain, r.name);
      if (s.dimension != r.dimension) throw LayoutError("preparation of '" + r.name + "' has the wrong dimension");
      ++covered[r.name];
      regs.push_back(r);
    }
  }
  for (const auto& s : chain.strands) {
    if (covered[s.name] != 1) throw ValueError("strand '" + s.name + "' must be prepared exactly once");
  }
  for (const auto& p : chain.pointers) regs.push_back({p.name(), p.dimension()});
  prog.layout = RegisterLayout(std::move(regs), chain.dimension_cap);

  State initial;
  bool first = true;
  for (const auto& prep : chain.preparations) {
    initial = first ? prep : tensor(initial, prep, chain.dimension_cap);
    first = false;
  }
  for (const auto& p : chain.pointers) initial = first ? p.ready_state() : tensor(initial, p.ready_state(), chain.dimension_cap);
  prog.initial = initial.amplitudes();

  for (const auto& p : chain.pointers) {
    const std::size_t i = prog.layout.index_of(p.name());
    prog.pointers.push_back({prog.layout.stride(i), p.dimension(), p.half_width()});
  }

  // (moment, phase, order) -> step.
  struct Pending {
    std::size_t moment;
    int phase;
    std::size_t order;
    Step step;
  };
  std::vector<Pending> pending;

  for (std::size_t si = 0; si < chain.strands.size(); ++si) {
    const Strand& s = chain.strands[si];
    const RegisterLayout sys = RegisterLayout::single(s.name, s.dimension);
    for (const auto& link : s.links) {
      if (link.kind() == Link::Kind::identity) continue;
      Step step;
      step.kind = link.preserves_norm() ? Step::Kind::unitary : Step::Kind::conditioning;
      step.ops.emplace_back(0.0, index_op(prog.layout, link_matrix(link, sys)));
      pending.push_back({link.to().k, 0, si, std::move(step)});
    }
  }

  std::map<std::string, int> pointer_load;
  std::size_t slot = 0;
  for (std::size_t ei = 0; ei < chain.events.size(); ++ei) {
    Step step;
    std::size_t moment = 0;
    std::visit(
        [&](const auto& ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, MeasureEvent>) {
            const Strand& s = find_strand(chain, ev.strand);
            require_covered(s, ev.at, "measurement");
            const Op obs = on_strand(ev.observable, s, "observable");
            step.kind = Step::Kind::branch;
            step.slot = slot++;
            for (const auto& c : spectral_decomposition(obs)) {
              step.ops.emplace_back(c.eigenvalue, index_op(prog.layout, c.projector));
            }
            prog.labels.push_back(ev.label);
            moment = ev.at.k;
          } else if constexpr (std::is_same_v<T, KrausEvent>) {
            const Strand& s = find_strand(chain, ev.strand);
            require_covered(s, ev.at, "generalized measurement");
            step.kind = Step::Kind::branch;
            step.slot = slot++;
            for (const auto& [value, k] : ev.branches) {
              step.ops.emplace_back(value, index_op(prog.layout, on_strand(k, s, "Kraus operator")));
            }
            prog.labels.push_back(ev.label);
            moment = ev.at.k;
          } else {
            if (ev.observable.layout().size() != 1) throw LayoutError("coupled observable must act on one register");
            const Strand& s = find_strand(chain, ev.observable.layout()[0].name);
            require_covered(s, ev.time, "pointer coupling");
            auto it = std::find_if(chain.pointers.begin(), chain.pointers.end(),
                                   [&](const PointerRegister& p) { return p.name() == ev.pointer; });
            if (it == chain.pointers.end()) throw LayoutError("unknown pointer '" + ev.pointer + "'");
            const int load = (pointer_load[ev.pointer] += integer_spectral_radius(ev.observable));
            if (load > it->half_width()) {
              throw PointerWraparound(ev.pointer, it->dimension(), PointerRegister::minimal_dimension(load));
            }
            step.kind = Step::Kind::unitary;
            step.ops.emplace_back(0.0, index_op(prog.layout, coupling_unitary(ev.observable, *it, ev.sign)));
            moment = ev.time.k;
          }
        },
        chain.events[ei]);
    pending.push_back({moment, 1, ei, std::move(step)});
  }
  prog.recorded = slot;
  for (const auto& p : chain.pointers) prog.labels.push_back(p.name());

  std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    if (a.moment != b.moment) return a.moment < b.moment;
    if (a.phase != b.phase) return a.phase < b.phase;
    return a.order < b.order;
  });
  for (auto& p : pending) prog.steps.push_back(std::move(p.step));

  std::set<std::string> posted;
  for (const auto& post : chain.post_selections) {
    if (!post.is_normalized(1e-10)) throw ValueError("post-selected state must be normalized");
    for (const auto& r : post.layout()) {
      find_strand(chain, r.name);
      if (!posted.insert(r.name).second) throw ValueError("strand '" + r.name + "' is post-selected twice");
    }
    prog.posts.push_back(index_op(prog.layout, Op::outer(post, post)));
  }
  return prog;
}

// Accumulates |amp|^2 by (recorded..., pointer positions...).
void accumulate(const Program& prog, const Vec& psi, const OutcomeKey& recorded, std::map<OutcomeKey, double>& acc) {
  if (prog.pointers.empty()) {
    const double w = psi.squaredNorm();
    if (w > 0) acc[recorded] += w;
    return;
  }
  std::map<std::vector<int>, double> readings;
  std::vector<int> positions(prog.pointers.size());
  for (Eigen::Index f = 0; f < psi.size(); ++f) {
    const double w = std::norm(psi(f));
    if (w == 0) continue;
    for (std::size_t i = 0; i < prog.pointers.size(); ++i) {
      const auto& p = prog.pointers[i];
      positions[i] = static_cast<int>((static_cast<std::size_t>(f) / p.stride) % p.dimension) - p.half;
    }
    readings[positions] += w;
  }
  OutcomeKey key = recorded;
  key.resize(prog.recorded + prog.pointers.size());
  for (const auto& [pos, w] : readings) {
    for (std::size_t i = 0; i < pos.size(); ++i) key[prog.recorded + i] = pos[i];
    acc[key] += w;
  }
}

void descend(const Program& prog, std::size_t step, Vec psi, OutcomeKey& recorded,
             std::map<OutcomeKey, double>& acc) {
  for (; step < prog.steps.size(); ++step) {
    const Step& s = prog.steps[step];
    if (s.kind != Step::Kind::branch) {
      psi = apply_indexed(s.ops.front().second, psi);
      continue;
    }
    for (const auto& [value, op] : s.ops) {
      Vec next = apply_indexed(op, psi);
      if (next.squaredNorm() <= kBranchCutoff) continue;
      recorded[s.slot] = value;
      descend(prog, step + 1, std::move(next), recorded, acc);
    }
    return;
  }
  for (const auto& post : prog.posts) psi = apply_indexed(post, psi);
  accumulate(prog, psi, recorded, acc);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Forward sampling walks a tree of random decision points: conditioning and
// post-selection (keep or reject), branching events (pick one) and the final
// pointer readout. A node depends only on the decisions above it, so nodes are
// cached up to a memory budget; a rebuilt node yields the same numbers, which
// keeps the draws for a seed independent of the cache.
class SampleTree {
 public:
  explicit SampleTree(const Program& prog) : prog_(prog), root_(build(0, prog.initial)) {}

  // One accepted-or-rejected pass; fills `key` on acceptance.
  bool sample(std::mt19937_64& rng, OutcomeKey& key) {
    key.assign(prog_.recorded + prog_.pointers.size(), 0.0);
    std::vector<std::unique_ptr<Node>> transient;
    Node* node = root_.get();
    while (true) {
      switch (node->kind) {
        case Node::Kind::keep:
          if (!(uniform01(rng) < node->total)) return false;
          node = child(*node, 0, transient);
          break;
        case Node::Kind::pick: {
          const double u = uniform01(rng) * node->total;
          double cumulative = 0;
          std::size_t pick = 0;
          for (; pick + 1 < node->weights.size(); ++pick) {
            cumulative += node->weights[pick];
            if (u < cumulative) break;
          }
          while (node->weights[pick] == 0 && pick > 0) --pick;
          key[node->slot] = node->values[pick];
          node = child(*node, pick, transient);
          break;
        }
        case Node::Kind::readout: {
          const double u = uniform01(rng) * node->total;
          double cumulative = 0;
          std::size_t f = 0;
          for (; f + 1 < node->weights.size(); ++f) {
            cumulative += node->weights[f];
            if (u < cumulative) break;
          }
          while (node->weights[f] == 0 && f > 0) --f;
          for (std::size_t i = 0; i < prog_.pointers.size(); ++i) {
            const auto& p = prog_.pointers[i];
            key[prog_.recorded + i] = static_cast<int>((f / p.stride) % p.dimension) - p.half;
          }
          return true;
        }
        case Node::Kind::accept:
          return true;
      }
    }
  }

 private:
  static constexpr std::size_t kCacheBudget = std::size_t{1} << 23;  // complex amplitudes

  struct Node {
    enum class Kind { keep, pick, readout, accept };
    Kind kind = Kind::accept;
    double total = 0;             // keep: acceptance probability; pick, readout: weight sum
    std::size_t slot = 0;         // pick
    std::vector<double> values;   // pick: recorded value per branch
    std::vector<double> weights;  // pick: branch weights; readout: |amplitude|^2 per index
    std::size_t next = 0;         // program position the children start from
    std::vector<Vec> states;      // normalized entry state per child, dropped once cached
    std::vector<std::unique_ptr<Node>> children;

    std::size_t footprint() const {
      std::size_t n = weights.size() / 2;
      for (const auto& v : states) n += static_cast<std::size_t>(v.size());
      return n;
    }
  };

  // Advances `psi` from program position `pos` (steps, then post-selections)
  // through unitary steps to the next random decision.
  std::unique_ptr<Node> build(std::size_t pos, Vec psi) const {
    auto node = std::make_unique<Node>();
    const std::size_t n_steps = prog_.steps.size();
    while (pos < n_steps && prog_.steps[pos].kind == Step::Kind::unitary) {
      psi = apply_indexed(prog_.steps[pos].ops.front().second, psi);
      ++pos;
    }
    node->next = pos + 1;
    if (pos < n_steps && prog_.steps[pos].kind == Step::Kind::branch) {
      const Step& s = prog_.steps[pos];
      node->kind = Node::Kind::pick;
      node->slot = s.slot;
      for (const auto& [value, op] : s.ops) {
        Vec branch = apply_indexed(op, psi);
        const double w = branch.squaredNorm();
        node->values.push_back(value);
        node->weights.push_back(w);
        node->total += w;
        node->states.push_back(w > 0 ? Vec(branch / std::sqrt(w)) : Vec());
      }
    } else if (pos < n_steps + prog_.posts.size()) {
      const IndexedOp& op = pos < n_steps ? prog_.steps[pos].ops.front().second : prog_.posts[pos - n_steps];
      Vec next = apply_indexed(op, psi);
      node->kind = Node::Kind::keep;
      node->total = next.squaredNorm() / psi.squaredNorm();
      node->states.push_back(node->total > 0 ? Vec(next / next.norm()) : Vec());
    } else if (!prog_.pointers.empty()) {
      node->kind = Node::Kind::readout;
      node->total = psi.squaredNorm();
      node->weights.resize(static_cast<std::size_t>(psi.size()));
      for (Eigen::Index f = 0; f < psi.size(); ++f) node->weights[static_cast<std::size_t>(f)] = std::norm(psi(f));
    }
    node->children.resize(node->states.size());
    return node;
  }

  Node* child(Node& parent, std::size_t i, std::vector<std::unique_ptr<Node>>& transient) {
    if (parent.children[i]) return parent.children[i].get();
    auto built = build(parent.next, parent.states[i]);
    if (stored_ + built->footprint() > kCacheBudget) {
      transient.push_back(std::move(built));
      return transient.back().get();
    }
    stored_ += built->footprint();
    parent.children[i] = std::move(built);
    // the cached child replaces the entry state it was built from
    stored_ -= std::min<std::size_t>(stored_, static_cast<std::size_t>(parent.states[i].size()));
    Vec().swap(parent.states[i]);
    return parent.children[i].get();
  }

  const Program& prog_;
  std::unique_ptr<Node> root_;
  std::size_t stored_ = 0;
};

}  // namespace

std::vector<std::string> outcome_labels(const MultiSystemChain& chain) {
  std::vector<std::string> labels;
  for (const auto& ev : chain.events) {
    if (const auto* m = std::get_if<MeasureEvent>(&ev)) labels.push_back(m->label);
    if (const auto* k = std::get_if<KrausEvent>(&ev)) labels.push_back(k->label);
  }
  for (const auto& p : chain.pointers) labels.push_back(p.name());
  return labels;
}

OutcomeStats exact_distribution(const MultiSystemChain& chain) {
  const Program prog = compile(chain);
  std::map<OutcomeKey, double> acc;
  OutcomeKey recorded(prog.recorded, 0.0);
  descend(prog, 0, prog.initial, recorded, acc);

  double total = 0;
  for (const auto& [k, w] : acc) total += w;
  if (!(total > kImpossibleWeight)) {
    std::ostringstream msg;
    msg << "conditioning impossible: pre/post boundaries and collapses leave weight " << total;
    throw ConditioningImpossible(msg.str());
  }
  OutcomeStats stats;
  stats.labels = prog.labels;
  stats.mode = ExactMode{};
  stats.success_probability = total;
  for (const auto& [k, w] : acc) {
    const double p = w / total;
    if (p > kNegligibleProbability) stats.outcomes.emplace(k, p);
  }
  return stats;
}

State evolve(const MultiSystemChain& chain) {
  const Program prog = compile(chain);
  Vec psi = prog.initial;
  for (const auto& s : prog.steps) {
    if (s.kind == Step::Kind::branch) throw ValueError("evolve: chain has branching measurement events");
    psi = apply_indexed(s.ops.front().second, psi);
  }
  for (const auto& post : prog.posts) psi = apply_indexed(post, psi);
  return State(prog.layout, std::move(psi));
}

OutcomeStats sample_distribution(const MultiSystemChain& chain, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ValueError("sample count must be positive");
  const Program prog = compile(chain);
  std::mt19937_64 rng(seed);
  constexpr std::size_t kFirstAcceptanceBudget = 1'000'000;
  const std::size_t budget = std::max<std::size_t>(kFirstAcceptanceBudget, 1000 * samples);

  std::map<OutcomeKey, std::size_t> counts;
  std::size_t accepted = 0;
  std::size_t attempts = 0;
  OutcomeKey key;
  SampleTree tree(prog);
  while (accepted < samples) {
    ++attempts;
    if ((accepted == 0 && attempts > kFirstAcceptanceBudget) || attempts > budget) {
      throw ConditioningImpossible("conditioning impossible: sampler acceptance probability is zero or negligible");
    }
    if (tree.sample(rng, key)) {
      ++counts[key];
      ++accepted;
    }
  }
  OutcomeStats stats;
  stats.labels = prog.labels;
  stats.mode = SampledMode{samples, seed};
  stats.success_probability = static_cast<double>(accepted) / static_cast<double>(attempts);
  for (const auto& [k, c] : counts) stats.outcomes.emplace(k, static_cast<double>(c) / static_cast<double>(samples));
  return stats;
}

OutcomeKey sample_once(const MultiSystemChain& chain, std::uint64_t seed) {
  const OutcomeStats s = sample_distribution(chain, 1, seed);
  return s.outcomes.begin()->first;
}

}  // namespace moments
