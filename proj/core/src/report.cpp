#include "longspan/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string_view>
#include <tuple>

#include "longspan/errors.hpp"
#include "longspan/util.hpp"

namespace longspan {

namespace {

GoldField resolve_gold(const Corpus& corpus, GoldField requested) {
  if (requested != GoldField::auto_detect) return requested;
  const bool all_norm =
      std::all_of(corpus.segments().begin(), corpus.segments().end(),
                  [](const AnnotatedSegment& s) {
                    return s.norm_score.has_value();
                  });
  return all_norm ? GoldField::norm : GoldField::raw;
}

double gold_value(const AnnotatedSegment& seg, GoldField gold) {
  if (gold == GoldField::norm) {
    if (!seg.norm_score) {
      throw config_error("segment '" + seg.id +
                         "' has no norm_score; normalize first or correlate "
                         "against raw scores");
    }
    return *seg.norm_score;
  }
  return seg.raw_score;
}

std::string gold_name(GoldField gold) {
  return gold == GoldField::norm ? "norm_score" : "raw_score";
}

struct GroupData {
  // (id, gold, predicted), sorted by id before use.
  std::vector<std::tuple<std::string_view, double, double>> points;
};

void append_metric_rows(
    std::vector<ReportRow>& rows, const std::string& group,
    std::span<const double> gold, std::span<const double> pred,
    std::map<std::string, std::vector<double>>& metric_values) {
  const double r_pearson = pearson(gold, pred);
  const double r_spearman = spearman(gold, pred);
  rows.push_back({group, "pearson", r_pearson, gold.size(), ""});
  rows.push_back({group, "spearman", r_spearman, gold.size(), ""});
  metric_values["pearson"].push_back(r_pearson);
  metric_values["spearman"].push_back(r_spearman);
}

void append_avg_rows(
    std::vector<ReportRow>& rows,
    const std::map<std::string, std::vector<double>>& metric_values) {
  for (const char* metric : {"pearson", "spearman"}) {
    const auto it = metric_values.find(metric);
    if (it == metric_values.end() || it->second.size() < 2) continue;
    double sum = 0.0;
    for (double v : it->second) sum += v;
    rows.push_back({"avg.", metric,
                    sum / static_cast<double>(it->second.size()),
                    it->second.size(), ""});
  }
}

}  // namespace

EvalReport segment_report(const ScoreVector& pred, const Corpus& corpus,
                          const GroupBySpec& group_by, GoldField gold) {
  check_coverage(pred.entries, corpus);
  const GoldField effective = resolve_gold(corpus, gold);

  std::map<std::string, GroupData> groups;
  for (const auto& seg : corpus.segments()) {
    std::string label;
    if (group_by.lang_pair) label = seg.lang_pair;
    if (group_by.scheme) {
      if (!label.empty()) label += '/';
      label += to_string(seg.scheme);
    }
    if (label.empty()) label = "all";
    groups[label].points.emplace_back(seg.id, gold_value(seg, effective),
                                      pred.entries.at(seg.id));
  }

  EvalReport report;
  report.level = ReportLevel::segment;
  report.scorer_name = pred.scorer_name;
  report.gold = gold_name(effective);

  std::map<std::string, std::vector<double>> metric_values;
  for (auto& [label, data] : groups) {
    if (data.points.size() < 2) {
      report.rows.push_back({label, "skipped", std::nullopt,
                             data.points.size(), "fewer than 2 segments"});
      continue;
    }
    std::sort(data.points.begin(), data.points.end());
    std::vector<double> gold_values, pred_values;
    gold_values.reserve(data.points.size());
    pred_values.reserve(data.points.size());
    for (const auto& [id, g, p] : data.points) {
      (void)id;
      gold_values.push_back(g);
      pred_values.push_back(p);
    }
    append_metric_rows(report.rows, label, gold_values, pred_values,
                       metric_values);
  }
  append_avg_rows(report.rows, metric_values);
  return report;
}

EvalReport system_report(const ScoreVector& pred, const Corpus& corpus,
                         GoldField gold) {
  check_coverage(pred.entries, corpus);
  const GoldField effective = resolve_gold(corpus, gold);

  // (lang_pair, scheme) -> system_id -> id-sorted points.
  std::map<std::string, std::map<std::string, GroupData>> groups;
  for (const auto& seg : corpus.segments()) {
    const std::string label =
        seg.lang_pair + "/" + std::string(to_string(seg.scheme));
    groups[label][seg.system_id].points.emplace_back(
        seg.id, gold_value(seg, effective), pred.entries.at(seg.id));
  }

  EvalReport report;
  report.level = ReportLevel::system;
  report.scorer_name = pred.scorer_name;
  report.gold = gold_name(effective);

  std::map<std::string, std::vector<double>> metric_values;
  for (auto& [label, systems] : groups) {
    if (systems.size() < 2) {
      throw degenerate_error(
          "group '" + label + "' has " + std::to_string(systems.size()) +
          " system(s); system-level correlation needs at least 2");
    }
    std::vector<double> gold_means, pred_means;
    gold_means.reserve(systems.size());
    pred_means.reserve(systems.size());
    for (auto& [system_id, data] : systems) {
      (void)system_id;
      std::sort(data.points.begin(), data.points.end());
      double gold_sum = 0.0, pred_sum = 0.0;
      for (const auto& [id, g, p] : data.points) {
        (void)id;
        gold_sum += g;
        pred_sum += p;
      }
      const double count = static_cast<double>(data.points.size());
      gold_means.push_back(gold_sum / count);
      pred_means.push_back(pred_sum / count);
    }
    append_metric_rows(report.rows, label, gold_means, pred_means,
                       metric_values);
  }
  append_avg_rows(report.rows, metric_values);
  return report;
}

void write_report_tsv(const EvalReport& report, std::ostream& out,
                      const std::vector<std::string>& comments) {
  if (!report.config_fingerprint.empty()) {
    out << "#fingerprint=" << report.config_fingerprint << '\n';
  }
  out << "#level=" << (report.level == ReportLevel::segment ? "segment"
                                                            : "system")
      << '\n';
  out << "#scorer=" << report.scorer_name << '\n';
  out << "#gold=" << report.gold << '\n';
  for (const auto& comment : comments) out << '#' << comment << '\n';
  out << "group\tmetric\tcoefficient\tn\tnote\n";
  for (const auto& row : report.rows) {
    out << row.group << '\t' << row.metric << '\t'
        << (row.coefficient ? format_double(*row.coefficient) : std::string())
        << '\t' << row.n << '\t' << row.note << '\n';
  }
}

void write_report_tsv_file(const EvalReport& report, const std::string& path,
                           const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw schema_error("cannot open for writing: " + path);
  write_report_tsv(report, out, comments);
  out.flush();
  if (!out) throw schema_error("write failed: " + path);
}

std::string render_report_table(const EvalReport& report) {
  const std::vector<std::string> header = {"group", "metric", "coeff", "n",
                                           "note"};
  std::vector<std::vector<std::string>> cells;
  cells.push_back(header);
  for (const auto& row : report.rows) {
    std::string coeff;
    if (row.coefficient) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", *row.coefficient);
      coeff = buf;
    }
    cells.push_back(
        {row.group, row.metric, coeff, std::to_string(row.n), row.note});
  }

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }

  std::ostringstream out;
  out << (report.level == ReportLevel::segment ? "segment" : "system")
      << "-level report (scorer: " << report.scorer_name
      << ", gold: " << report.gold << ")\n";
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << "  ";
      out << row[c];
      if (c + 1 < row.size()) {
        out << std::string(widths[c] - row[c].size(), ' ');
      }
    }
    out << '\n';
  }
  if (report.histogram) {
    out << "score distribution [" << format_double(report.histogram->lo)
        << ", " << format_double(report.histogram->hi) << "]\n";
    for (const auto& bin : report.histogram->bins) {
      out << "  " << format_double(bin.lo) << " .. " << format_double(bin.hi)
          << "  " << bin.count << '\n';
    }
  }
  return out.str();
}

}  // namespace longspan
