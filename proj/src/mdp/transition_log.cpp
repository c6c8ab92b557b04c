#include "driftnav/mdp/transition_log.hpp"

#include <ostream>

namespace driftnav::mdp {

void write_transition_log(std::ostream& out, const RewardConfig& config, std::span<const Transition> log,
                          int n_slots) {
  out << "# reward " << config.describe() << '\n';
  out << "s_x_e,s_y_e,s_y_c_norm,s_edge_l,s_edge_r";
  for (int i = 1; i <= n_slots; ++i) out << ",s_tr_p_" << i << ",s_x_tr_" << i << ",s_y_tr_" << i << ",s_v_tr_" << i;
  out << ",action,a_x,a_y,G,F,T,P";
  for (int i = 1; i <= n_slots; ++i) out << ",p_" << i;
  out << ",total,done\n";
  out.precision(17);
  for (const auto& t : log) {
    const auto v = t.state.to_vector();
    for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << v(i);
    const Action a = Action::from_index(t.action);
    out << ',' << t.action << ',' << a.a_x << ',' << a.a_y << ',' << t.reward.G << ',' << t.reward.F << ','
        << t.reward.T << ',' << t.reward.P;
    for (int i = 0; i < n_slots; ++i)
      out << ',' << (static_cast<std::size_t>(i) < t.reward.p.size() && t.reward.p[static_cast<std::size_t>(i)]);
    out << ',' << t.reward.total << ',' << t.done << '\n';
  }
}

}  // namespace driftnav::mdp
