#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <istream>
#include <stdexcept>

#include "dqcsched/bench.hpp"

namespace dqc::bench {

const std::vector<std::string> kSlotColumns{
    "setting",   "seed",          "slot",          "scheduler",
    "n_jobs",    "makespan_ns",   "qpu_utilization", "nonlocal_gate_density",
    "selp",      "fairness",      "t_overlap_ns",  "t_max_ns",
    "job_kinds"};

const std::vector<std::string> kSummaryColumns{"setting", "scheduler", "makespan_ns",
                                               "qpu_utilization", "nonlocal_gate_density",
                                               "selp", "fairness"};

const std::vector<std::string> kMetricColumns{"makespan_ns", "qpu_utilization",
                                              "nonlocal_gate_density", "selp",
                                              "fairness", "t_overlap_ns", "t_max_ns"};

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, p);
}

namespace {

CsvTable to_table(const std::vector<SlotRecord>& records) {
  CsvTable t;
  t.header = kSlotColumns;
  for (const auto& r : records) {
    std::vector<std::string> row{r.setting, std::to_string(r.seed), std::to_string(r.slot),
                                 r.scheduler, std::to_string(r.n_jobs)};
    if (r.metrics) {
      const auto& m = *r.metrics;
      row.push_back(std::to_string(m.makespan_ns));
      row.push_back(format_double(m.qpu_utilization));
      row.push_back(format_double(m.nonlocal_gate_density));
      row.push_back(format_double(m.selp));
      row.push_back(format_double(m.fairness));
      row.push_back(std::to_string(m.t_overlap_ns));
      row.push_back(std::to_string(m.t_max_ns));
    } else {
      row.insert(row.end(), 7, std::string());
    }
    row.push_back(r.job_kinds);
    t.rows.push_back(std::move(row));
  }
  return t;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw std::runtime_error("not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::runtime_error("missing CSV column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
  auto split = [](std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
      const auto pos = line.find(',', start);
      out.push_back(line.substr(start, pos == std::string::npos ? pos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return out;
  };
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV input");
  t.header = split(line);
  std::size_t no = 1;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty() || line == "\r") continue;
    auto row = split(line);
    if (row.size() != t.header.size()) {
      throw std::runtime_error("CSV line " + std::to_string(no) + " has " +
                               std::to_string(row.size()) + " fields, expected " +
                               std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

void write_slot_records(std::ostream& out, const std::vector<SlotRecord>& records) {
  write_csv(out, to_table(records));
}

CsvTable summarize(const CsvTable& records) {
  const std::size_t c_setting = records.column("setting");
  const std::size_t c_sched = records.column("scheduler");
  std::vector<std::size_t> metric_cols;
  for (std::size_t i = 2; i < kSummaryColumns.size(); ++i) {
    metric_cols.push_back(records.column(kSummaryColumns[i]));
  }
  struct Acc {
    std::vector<double> sum;
    std::vector<std::size_t> count;
  };
  std::map<std::pair<std::string, std::string>, Acc> groups;
  for (const auto& row : records.rows) {
    Acc& a = groups[{row[c_setting], row[c_sched]}];
    a.sum.resize(metric_cols.size(), 0.0);
    a.count.resize(metric_cols.size(), 0);
    for (std::size_t m = 0; m < metric_cols.size(); ++m) {
      const std::string& v = row[metric_cols[m]];
      if (v.empty()) continue;
      a.sum[m] += parse_number(v);
      ++a.count[m];
    }
  }
  CsvTable out;
  out.header = kSummaryColumns;
  for (const auto& [key, a] : groups) {
    std::vector<std::string> row{key.first, key.second};
    for (std::size_t m = 0; m < metric_cols.size(); ++m) {
      row.push_back(a.count[m] ? format_double(a.sum[m] / static_cast<double>(a.count[m]))
                               : std::string());
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

CsvTable summarize(const std::vector<SlotRecord>& records) { return summarize(to_table(records)); }

CsvTable cdf_export(const CsvTable& records, std::string_view metric,
                    const std::optional<std::string>& setting) {
  if (std::find(kMetricColumns.begin(), kMetricColumns.end(), metric) == kMetricColumns.end()) {
    throw std::invalid_argument("unknown metric '" + std::string(metric) + "'");
  }
  const std::size_t c_metric = records.column(metric);
  const std::size_t c_sched = records.column("scheduler");
  const std::size_t c_setting = records.column("setting");
  std::map<std::string, std::vector<double>> values;
  for (const auto& row : records.rows) {
    if (setting && row[c_setting] != *setting) continue;
    if (row[c_metric].empty()) continue;
    values[row[c_sched]].push_back(parse_number(row[c_metric]));
  }
  CsvTable out;
  out.header = {"scheduler", "value", "cum_prob"};
  for (auto& [sched, v] : values) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      out.rows.push_back({sched, format_double(v[k]),
                          format_double(static_cast<double>(k + 1) / n)});
    }
  }
  return out;
}

std::vector<std::string> settings_in(const CsvTable& records) {
  const std::size_t c = records.column("setting");
  std::vector<std::string> out;
  for (const auto& row : records.rows) {
    if (std::find(out.begin(), out.end(), row[c]) == out.end()) out.push_back(row[c]);
  }
  return out;
}

}  // namespace dqc::bench
