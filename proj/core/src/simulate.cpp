#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <functional>

#include "exact_json.hpp"
#include "haarboost/cluster.hpp"

namespace haarboost {

namespace {

using nlohmann::json;

std::string report_to_line(const RoleReport& r) {
  json timings = json::array();
  for (const auto& t : r.timings) timings.push_back({t.round, t.normalize_s, t.scan_s, t.reduce_s, t.update_s});
  return detail::dump_exact(
      json{{"node", r.node}, {"role", std::string(to_string(r.role))}, {"timings", std::move(timings)}});
}

RoleReport report_from_line(const std::string& line, RoleKind role) {
  const json j = json::parse(line);
  RoleReport r;
  r.node = j.at("node").get<std::string>();
  r.role = role;
  for (const json& t : j.at("timings")) {
    r.timings.push_back(
        {t.at(0).get<int>(), t.at(1).get<double>(), t.at(2).get<double>(), t.at(3).get<double>(), t.at(4).get<double>()});
  }
  return r;
}

void write_all(int fd, const std::string& s) {
  std::size_t off = 0;
  while (off < s.size()) {
    const ssize_t n = ::write(fd, s.data() + off, s.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return;
    off += static_cast<std::size_t>(n);
  }
}

struct Child {
  std::string node;
  RoleKind role;
  pid_t pid = -1;
  int out_fd = -1;
  std::string output;
  int status = 0;
  bool reaped = false;
};

/// Forks `body` into a child process. The child's report (or error) comes back over a pipe.
Child spawn(std::string node, RoleKind role, const std::vector<int>& close_in_child,
            const std::function<RoleReport()>& body) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw ClusterError("pipe failed");
  std::fflush(nullptr);
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw ClusterError("fork failed");
  }
  if (pid == 0) {
    ::signal(SIGPIPE, SIG_IGN);
    ::close(fds[0]);
    for (int fd : close_in_child) ::close(fd);
    int code = 0;
    std::string out;
    try {
      out = report_to_line(body());
    } catch (const std::exception& e) {
      out = detail::dump_exact(json{{"error", e.what()}});
      code = 1;
    }
    write_all(fds[1], out);
    ::_exit(code);
  }
  ::close(fds[1]);
  return Child{std::move(node), role, pid, fds[0], {}, 0, false};
}

/// Drains every child's pipe and reaps it. Children still running at the deadline are killed.
void collect(std::vector<Child>& children, net::Deadline deadline) {
  for (;;) {
    std::vector<pollfd> fds;
    std::vector<Child*> open;
    for (auto& c : children) {
      if (c.out_fd >= 0) {
        fds.push_back({c.out_fd, POLLIN, 0});
        open.push_back(&c);
      }
    }
    if (fds.empty()) break;
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - net::Clock::now()).count();
    if (left <= 0) {
      for (Child* c : open) {
        ::kill(c->pid, SIGKILL);
        ::close(c->out_fd);
        c->out_fd = -1;
      }
      break;
    }
    const int rc = ::poll(fds.data(), fds.size(), static_cast<int>(std::min<long long>(left, 1000)));
    if (rc <= 0) continue;
    for (std::size_t i = 0; i < fds.size(); ++i) {
      if (fds[i].revents == 0) continue;
      char buf[4096];
      const ssize_t n = ::read(open[i]->out_fd, buf, sizeof buf);
      if (n > 0) {
        open[i]->output.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || errno != EINTR) {
        ::close(open[i]->out_fd);
        open[i]->out_fd = -1;
      }
    }
  }
  for (auto& c : children) {
    while (::waitpid(c.pid, &c.status, 0) < 0 && errno == EINTR) {
    }
    c.reaped = true;
  }
}

std::string pad2(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02zu", i);
  return buf;
}

}  // namespace

std::vector<std::string> simulated_worker_ids(const Topology& topology) {
  std::vector<std::string> ids;
  if (topology.levels == Levels::OneLevel) {
    for (std::size_t i = 1; i <= topology.submasters; ++i) ids.push_back("w" + pad2(i));
  } else {
    for (std::size_t s = 1; s <= topology.submasters; ++s) {
      for (std::size_t i = 1; i <= topology.fanout; ++i) ids.push_back("s" + pad2(s) + ".w" + pad2(i));
    }
  }
  return ids;
}

SimulationResult simulate_local(const Topology& topology, const Dataset& data, int rounds,
                                const SimulateOptions& options) {
  if (topology.submasters < 1 || (topology.levels == Levels::TwoLevel && topology.fanout < 1)) {
    throw ClusterError("simulate_local: topology needs at least one child per level");
  }
  const auto start = net::Clock::now();
  (void)standard_features();  // build once; children inherit it

  net::Listener master_listener = net::Listener::bind({"127.0.0.1", 0});
  const net::Endpoint master_ep{"127.0.0.1", master_listener.port()};

  std::vector<net::Listener> sub_listeners;
  if (topology.levels == Levels::TwoLevel) {
    for (std::size_t s = 0; s < topology.submasters; ++s) sub_listeners.push_back(net::Listener::bind({"127.0.0.1", 0}));
  }
  std::vector<int> all_listener_fds{master_listener.fd()};
  for (auto& l : sub_listeners) all_listener_fds.push_back(l.fd());

  auto worker_config = [&](const std::string& id, const net::Endpoint& parent) {
    WorkerConfig wc;
    wc.node_id = id;
    wc.parent = parent;
    wc.worker_budget = options.worker_budget;
    wc.options = options.cluster;
    if (options.crash && options.crash->first == id) wc.crash_at_round = options.crash->second;
    return wc;
  };

  std::vector<Child> children;
  try {
    if (topology.levels == Levels::OneLevel) {
      for (const auto& id : simulated_worker_ids(topology)) {
        const WorkerConfig wc = worker_config(id, master_ep);
        children.push_back(spawn(id, RoleKind::Worker, all_listener_fds, [&data, wc] { return run_worker(data, wc); }));
      }
    } else {
      for (std::size_t s = 0; s < topology.submasters; ++s) {
        const std::string sid = "s" + pad2(s + 1);
        const net::Endpoint sub_ep{"127.0.0.1", sub_listeners[s].port()};
        std::vector<int> close_fds;
        for (int fd : all_listener_fds) {
          if (fd != sub_listeners[s].fd()) close_fds.push_back(fd);
        }
        SubmasterConfig sc{sid, master_ep, topology.fanout, options.cluster};
        net::Listener* own = &sub_listeners[s];
        children.push_back(spawn(sid, RoleKind::SubMaster, close_fds, [own, sc] { return run_submaster(*own, sc); }));
        for (std::size_t i = 1; i <= topology.fanout; ++i) {
          const std::string wid = sid + ".w" + pad2(i);
          const WorkerConfig wc = worker_config(wid, sub_ep);
          children.push_back(
              spawn(wid, RoleKind::Worker, all_listener_fds, [&data, wc] { return run_worker(data, wc); }));
        }
      }
    }
  } catch (...) {
    for (auto& c : children) ::kill(c.pid, SIGKILL);
    collect(children, net::deadline_in(std::chrono::seconds(5)));
    throw;
  }
  for (auto& l : sub_listeners) l.close();

  MasterConfig mc;
  mc.expected_children = topology.submasters;
  mc.feature_count = options.feature_count;
  mc.rounds = rounds;
  mc.options = options.cluster;
  mc.on_round = options.on_round;

  SimulationResult result;
  try {
    result.master = run_master(master_listener, data, mc);
  } catch (...) {
    master_listener.close();
    collect(children, net::deadline_in(options.cluster.handshake_timeout));
    throw;
  }
  master_listener.close();
  collect(children, net::deadline_in(options.cluster.handshake_timeout));

  for (const auto& c : children) {
    const bool ok = WIFEXITED(c.status) && WEXITSTATUS(c.status) == 0;
    if (!ok) {
      std::string why = "exited abnormally";
      try {
        why = json::parse(c.output).at("error").get<std::string>();
      } catch (const std::exception&) {
      }
      throw ClusterError("simulate_local: " + c.node + " failed after the job: " + why);
    }
    result.children.push_back(report_from_line(c.output, c.role));
  }
  std::sort(result.children.begin(), result.children.end(),
            [](const RoleReport& a, const RoleReport& b) { return a.node < b.node; });
  result.model = result.master.model;
  result.wall_s = std::chrono::duration<double>(net::Clock::now() - start).count();
  return result;
}

}  // namespace haarboost
