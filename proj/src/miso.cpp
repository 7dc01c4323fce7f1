#include "ccm/miso.hpp"

#include <algorithm>
#include <map>

#include "ccm/model.hpp"
#include "ccm/placement.hpp"

namespace ccm {

namespace {

void require_virtual_view(const NetworkConfig& config) {
  if (config.G != 1) {
    fail(ErrorCode::kConfigMismatch,
         "baseline generators expect the virtual MISO view (G = 1); use virtual_config first");
  }
}

std::vector<int> checked_demands(const NetworkConfig& config, const std::vector<int>& demands) {
  if (demands.empty()) fail(ErrorCode::kDemandMissing, "no demand vector supplied");
  return demands_from_list(demands, config);
}

/// Enumerates k-subsets of `pool` in lexicographic order.
class SubsetIter {
 public:
  SubsetIter(const std::vector<int>& pool, int k) : pool_(pool), k_(k), idx_(k) {
    for (int i = 0; i < k; ++i) idx_[i] = i;
    done_ = k > static_cast<int>(pool.size());
  }
  bool done() const { return done_; }
  std::vector<int> current() const {
    std::vector<int> out(k_);
    for (int i = 0; i < k_; ++i) out[i] = pool_[idx_[i]];
    return out;
  }
  void next() {
    const int n = static_cast<int>(pool_.size());
    int pos = k_ - 1;
    while (pos >= 0 && idx_[pos] == n - (k_ - pos)) --pos;
    if (pos < 0) {
      done_ = true;
      return;
    }
    ++idx_[pos];
    for (int i = pos + 1; i < k_; ++i) idx_[i] = idx_[i - 1] + 1;
  }

 private:
  std::vector<int> pool_;
  int k_;
  std::vector<int> idx_;
  bool done_ = false;
};

}  // namespace

DemandState DemandState::for_cyclic_t1(const NetworkConfig& config, const std::vector<int>& demands) {
  DemandState state;
  state.K = config.K;
  state.serve_size = config.t + config.eta;
  state.per_pair = config.t + config.eta;
  state.demands = demands;
  state.remaining.assign(static_cast<size_t>(config.K) * config.K, 0);
  state.per_user.assign(config.K, 0);
  for (int user = 1; user <= config.K; ++user) {
    for (int packet = 1; packet <= config.K; ++packet) {
      if (packet == user) continue;  // cached (t = 1 cyclic window)
      state.at(user, packet) = state.per_pair;
      state.per_user[user - 1] += state.per_pair;
      state.total += state.per_pair;
    }
  }
  return state;
}

namespace {

class Scheduler {
 public:
  Scheduler(DemandState& state, const NetworkConfig& config, long long budget)
      : state_(state), budget_(budget) {
    duration_ = Rational(1, static_cast<long long>(config.K) * (config.t + config.eta));
    next_q_.assign(state_.remaining.size(), 0);
    // Ascending rotation order: hub user major, target packet walking
    // cyclically from hub+1.  The happy path visits each pair exactly once.
    for (int hub = 1; hub <= state_.K; ++hub) {
      for (int step = 1; step < state_.K; ++step) {
        pivot_order_.push_back({hub, (hub - 1 + step) % state_.K + 1});
      }
    }
  }

  ScheduleResult run() {
    if (!solve(0)) {
      fail(ErrorCode::kScheduleNotFound,
           "no full schedule found within " + std::to_string(budget_) + " nodes");
    }
    ScheduleResult result;
    result.transmissions = std::move(schedule_);
    result.nodes = nodes_;
    return result;
  }

 private:
  bool feasible() const {
    if (state_.total == 0) return true;
    const long long slots_left = state_.total / state_.serve_size;
    int active = 0, tight = 0;
    for (int user = 1; user <= state_.K; ++user) {
      const long long owed = state_.per_user[user - 1];
      if (owed > slots_left) return false;  // user cannot be served often enough
      if (owed > 0) ++active;
      if (owed == slots_left) ++tight;
    }
    return active >= state_.serve_size && tight <= state_.serve_size;
  }

  bool solve(size_t cursor) {
    if (state_.total == 0) return true;
    if (!feasible()) return false;

    // Pivot: next pair with outstanding demand in rotation order (one wrap).
    size_t position = cursor;
    int pivot_user = 0, pivot_packet = 0;
    for (size_t offset = 0; offset < pivot_order_.size(); ++offset) {
      const auto& [user, packet] = pivot_order_[(cursor + offset) % pivot_order_.size()];
      if (state_.at(user, packet) > 0) {
        pivot_user = user;
        pivot_packet = packet;
        position = (cursor + offset) % pivot_order_.size() + 1;
        break;
      }
    }
    if (pivot_user == 0) return false;

    std::vector<int> tight_users;
    const long long slots_left = state_.total / state_.serve_size;
    for (int user = 1; user <= state_.K; ++user) {
      if (state_.per_user[user - 1] == slots_left) tight_users.push_back(user);
    }

    for (const std::vector<int>& serve : serve_set_candidates(pivot_user, pivot_packet)) {
      bool covers_tight = true;
      for (int user : tight_users) {
        if (!std::binary_search(serve.begin(), serve.end(), user)) {
          covers_tight = false;
          break;
        }
      }
      if (!covers_tight) continue;
      std::vector<std::pair<int, int>> assignment{{pivot_user, pivot_packet}};
      if (try_assign(serve, assignment, position)) return true;
    }
    return false;
  }

  /// Serve sets containing {pivot_user, pivot_packet}: the cyclic window after
  /// the pivot packet first, then every other completion in lex order.
  std::vector<std::vector<int>> serve_set_candidates(int pivot_user, int pivot_packet) const {
    std::vector<std::vector<int>> candidates;
    std::vector<int> window{pivot_user, pivot_packet};
    for (int next = pivot_packet % state_.K + 1; static_cast<int>(window.size()) < state_.serve_size;
         next = next % state_.K + 1) {
      if (next != pivot_user && next != pivot_packet) window.push_back(next);
    }
    std::sort(window.begin(), window.end());
    candidates.push_back(window);

    std::vector<int> pool;
    for (int user = 1; user <= state_.K; ++user) {
      if (user != pivot_user && user != pivot_packet) pool.push_back(user);
    }
    for (SubsetIter it(pool, state_.serve_size - 2); !it.done(); it.next()) {
      std::vector<int> serve = it.current();
      serve.push_back(pivot_user);
      serve.push_back(pivot_packet);
      std::sort(serve.begin(), serve.end());
      if (serve != window) candidates.push_back(std::move(serve));
    }
    return candidates;
  }

  /// Assigns an owner packet to every served user beyond those already fixed;
  /// the pivot user first tries to be everyone's owner (hub pattern), then
  /// owners in (remaining desc, index asc) order.
  bool try_assign(const std::vector<int>& serve, std::vector<std::pair<int, int>>& assignment,
                  size_t cursor) {
    if (assignment.size() == serve.size()) return commit(serve, assignment, cursor);
    const int member = [&] {
      for (int user : serve) {
        bool taken = false;
        for (const auto& [r, p] : assignment) taken |= (r == user);
        if (!taken) return user;
      }
      return 0;
    }();

    std::vector<int> owners;
    for (int owner : serve) {
      if (owner != member && state_.at(member, owner) > 0) owners.push_back(owner);
    }
    if (owners.empty()) return false;
    const int pivot_user = assignment.front().first;
    std::stable_sort(owners.begin(), owners.end(), [&](int a, int b) {
      const bool hub_a = a == pivot_user, hub_b = b == pivot_user;
      if (hub_a != hub_b) return hub_a;
      return state_.at(member, a) != state_.at(member, b) ? state_.at(member, a) > state_.at(member, b)
                                                          : a < b;
    });

    for (int owner : owners) {
      assignment.push_back({member, owner});
      if (try_assign(serve, assignment, cursor)) return true;
      assignment.pop_back();
    }
    return false;
  }

  bool commit(const std::vector<int>& serve, const std::vector<std::pair<int, int>>& assignment,
              size_t cursor) {
    if (nodes_ >= budget_) return false;
    ++nodes_;
    TransmissionVector tv;
    tv.index = static_cast<int>(schedule_.size()) + 1;
    tv.duration = duration_;
    for (const auto& [user, packet] : assignment) {
      state_.at(user, packet) -= 1;
      state_.per_user[user - 1] -= 1;
      state_.total -= 1;

      Term term;
      term.recipient = {user, 0};
      term.subpacket.file = state_.demands[user - 1];
      term.subpacket.packet = PacketLabel::cyclic(packet);
      term.subpacket.q = ++next_q_[(user - 1) * state_.K + (packet - 1)];
      for (int other : serve) {
        if (other != user && other != packet) term.zf.push_back({other, 0});
      }
      tv.terms.push_back(std::move(term));
    }
    canonicalize_terms(tv);
    schedule_.push_back(std::move(tv));

    if (solve(cursor)) return true;

    schedule_.pop_back();
    for (const auto& [user, packet] : assignment) {
      state_.at(user, packet) += 1;
      state_.per_user[user - 1] += 1;
      state_.total += 1;
      --next_q_[(user - 1) * state_.K + (packet - 1)];
    }
    return false;
  }

  DemandState& state_;
  long long budget_ = 0;
  long long nodes_ = 0;
  Rational duration_;
  std::vector<int> next_q_;
  std::vector<std::pair<int, int>> pivot_order_;
  std::vector<TransmissionVector> schedule_;
};

}  // namespace

ScheduleResult schedule_search(DemandState& state, const NetworkConfig& config, long long node_budget) {
  if (config.t != 1) fail(ErrorCode::kUnsupportedT, "exact scheduler supports t = 1 only");
  if (state.serve_size < 2 || state.serve_size > state.K) {
    fail(ErrorCode::kBadInput, "serve size must lie in [2, K]");
  }
  return Scheduler(state, config, node_budget).run();
}

DeliveryScheme cyclic_t1_scheduler(const NetworkConfig& config, const std::vector<int>& demands,
                                   long long node_budget) {
  require_virtual_view(config);
  if (config.t != 1) fail(ErrorCode::kUnsupportedT, "cyclic baseline supports t = 1 only");
  if (config.eta < config.t) {
    fail(ErrorCode::kApplicability, "cyclic baseline applies only when eta >= t");
  }
  DeliveryScheme scheme;
  scheme.config = config;
  scheme.flavor = Flavor::kMisoSignal;
  scheme.placement = cyclic_placement(config);
  scheme.demands = checked_demands(config, demands);
  scheme.subpackets_per_file = static_cast<long long>(config.K) * (config.t + config.eta);
  if (scheme.config.F == 0) scheme.config.F = scheme.subpackets_per_file;

  DemandState state = DemandState::for_cyclic_t1(config, scheme.demands);
  scheme.transmissions = schedule_search(state, config, node_budget).transmissions;
  scheme.mac_mode = max_terms_per_recipient(scheme) > 1;
  return scheme;
}

DeliveryScheme multiserver_bitlevel(const NetworkConfig& config, const std::vector<int>& demands) {
  require_virtual_view(config);
  DeliveryScheme scheme;
  scheme.config = config;
  scheme.flavor = Flavor::kMisoBit;
  scheme.mac_mode = true;  // codewords decode jointly from one dimension
  scheme.placement = subset_placement(config);
  scheme.demands = checked_demands(config, demands);

  const int t = config.t, eta = config.eta;
  const long long minifiles = binomial(config.K - t - 1, eta - 1);
  scheme.subpackets_per_file = binomial(config.K, t) * minifiles;
  if (scheme.config.F == 0) scheme.config.F = scheme.subpackets_per_file;
  const Rational duration(binomial(t + eta - 1, t), scheme.subpackets_per_file);

  std::vector<int> everyone(config.K);
  for (int i = 0; i < config.K; ++i) everyone[i] = i + 1;

  // fresh minifile index per (recipient, subfile) use, in lex (S, T) order
  std::map<std::pair<int, PacketLabel>, int> next_q;

  for (SubsetIter serve_it(everyone, t + eta); !serve_it.done(); serve_it.next()) {
    const std::vector<int> serve = serve_it.current();
    TransmissionVector tv;
    tv.index = static_cast<int>(scheme.transmissions.size()) + 1;
    tv.duration = duration;
    for (SubsetIter codeword_it(serve, t + 1); !codeword_it.done(); codeword_it.next()) {
      const std::vector<int> group = codeword_it.current();
      Term term;
      for (int user : group) {
        std::vector<int> subfile;
        for (int other : group) {
          if (other != user) subfile.push_back(other);
        }
        Constituent part;
        part.user = user;
        part.subpacket.file = scheme.demands[user - 1];
        part.subpacket.packet = PacketLabel::of_subset(subfile);
        part.subpacket.q = ++next_q[{user, part.subpacket.packet}];
        term.xor_parts.push_back(std::move(part));
      }
      for (int user : serve) {
        if (!std::binary_search(group.begin(), group.end(), user)) term.zf.push_back({user, 0});
      }
      tv.terms.push_back(std::move(term));
    }
    canonicalize_terms(tv);
    scheme.transmissions.push_back(std::move(tv));
  }
  return scheme;
}

DeliveryScheme decouple(const DeliveryScheme& scheme) {
  if (scheme.flavor != Flavor::kMisoBit) {
    fail(ErrorCode::kWrongFlavor, "decouple expects a miso-bit scheme");
  }
  DeliveryScheme out = scheme;
  out.flavor = Flavor::kMisoSignal;
  for (TransmissionVector& tv : out.transmissions) {
    std::vector<Term> plain;
    for (const Term& term : tv.terms) {
      for (const Constituent& part : term.xor_parts) {
        Term single;
        single.recipient = {part.user, 0};
        single.subpacket = part.subpacket;
        single.zf = term.zf;
        plain.push_back(std::move(single));
      }
    }
    tv.terms = std::move(plain);
    canonicalize_terms(tv);
  }
  out.mac_mode = max_terms_per_recipient(out) > 1;
  return out;
}

int max_terms_per_recipient(const DeliveryScheme& scheme) {
  int worst = 0;
  for (const TransmissionVector& tv : scheme.transmissions) {
    std::map<StreamId, int> counts;
    for (const Term& term : tv.terms) {
      if (term.is_xor()) {
        for (const Constituent& part : term.xor_parts) worst = std::max(worst, ++counts[{part.user, 0}]);
      } else {
        worst = std::max(worst, ++counts[term.recipient]);
      }
    }
  }
  return worst;
}

}  // namespace ccm
