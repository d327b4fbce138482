#include "msprog/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "msprog/errors.hpp"
#include "msprog/format.hpp"

namespace msprog {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_cell(const std::string& s, std::size_t line_no) {
    if (s.empty()) return kMissing;
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": malformed numeric cell '" + s + "'");
    }
    if (pos != s.size())
        throw ParseError("line " + std::to_string(line_no) +
                         ": malformed numeric cell '" + s + "'");
    return v;
}

}  // namespace

std::size_t LongitudinalCohort::labeled_observations() const {
    std::size_t n = 0;
    for (const auto& p : patients) n += p.labels.size();
    return n;
}

LongitudinalCohort load_cohort(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty input: missing header");
    auto header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "patient_id" ||
        header[1] != "time_point" || header[2] != "course") {
        throw ParseError(
            "bad header: expected patient_id,time_point,course,q...");
    }

    LongitudinalCohort cohort;
    cohort.n_features = static_cast<int>(header.size()) - 3;
    cohort.feature_names.assign(header.begin() + 3, header.end());

    std::unordered_map<std::string, std::size_t> patient_index;
    std::set<std::pair<std::string, int>> seen;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));

        const std::string& pid = fields[0];
        if (pid.empty())
            throw ParseError("line " + std::to_string(line_no) +
                             ": empty patient_id");

        int t;
        try {
            t = std::stoi(fields[1]);
        } catch (const std::exception&) {
            t = -1;
        }
        if (t < 1)
            throw ParseError("line " + std::to_string(line_no) +
                             ": time_point must be a positive integer, got '" +
                             fields[1] + "'");

        if (!seen.insert({pid, t}).second)
            throw ParseError("line " + std::to_string(line_no) +
                             ": duplicate (patient_id, time_point) = (" + pid +
                             ", " + std::to_string(t) + ")");

        int label = 0;
        bool has_label = false;
        const std::string& course = fields[2];
        if (course == "RR" || course == "-1") {
            label = -1;
            has_label = true;
        } else if (course == "SP" || course == "+1" || course == "1") {
            label = +1;
            has_label = true;
        } else if (!course.empty()) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": unknown course label '" + course + "'");
        }

        Eigen::VectorXd x(cohort.n_features);
        for (int j = 0; j < cohort.n_features; ++j)
            x[j] = parse_cell(fields[3 + static_cast<std::size_t>(j)], line_no);

        auto it = patient_index.find(pid);
        if (it == patient_index.end()) {
            it = patient_index.emplace(pid, cohort.patients.size()).first;
            cohort.patients.push_back(PatientSeries{pid, {}, {}});
        }
        PatientSeries& series = cohort.patients[it->second];
        series.observations.emplace(t, std::move(x));
        if (has_label) series.labels.emplace(t, label);
        cohort.time_points = std::max(cohort.time_points, t);
    }
    return cohort;
}

LongitudinalCohort load_cohort_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open cohort file: " + path);
    return load_cohort(in);
}

void write_cohort_csv(const LongitudinalCohort& cohort, std::ostream& out) {
    out << "patient_id,time_point,course";
    for (const auto& name : cohort.feature_names) out << ',' << name;
    out << '\n';
    for (const auto& p : cohort.patients) {
        for (const auto& [t, x] : p.observations) {
            out << p.patient_id << ',' << t << ',';
            auto lab = p.labels.find(t);
            if (lab != p.labels.end()) out << (lab->second > 0 ? "SP" : "RR");
            for (int j = 0; j < cohort.n_features; ++j) {
                out << ',';
                if (!std::isnan(x[j])) out << format_double(x[j]);
            }
            out << '\n';
        }
    }
}

ImputePolicy median_impute_policy(const LongitudinalCohort& cohort, int t_lo,
                                  int t_hi) {
    const int d = cohort.n_features;
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(d));
    for (const auto& p : cohort.patients) {
        for (const auto& [t, x] : p.observations) {
            if (t < t_lo || t > t_hi) continue;
            for (int j = 0; j < d; ++j)
                if (!std::isnan(x[j]))
                    cols[static_cast<std::size_t>(j)].push_back(x[j]);
        }
    }
    ImputePolicy policy;
    policy.fill.resize(d);
    for (int j = 0; j < d; ++j) {
        auto& c = cols[static_cast<std::size_t>(j)];
        if (c.empty())
            throw DataError("feature " +
                            (j < static_cast<int>(cohort.feature_names.size())
                                 ? cohort.feature_names[static_cast<std::size_t>(j)]
                                 : std::to_string(j + 1)) +
                            " has no observed value in the imputation range");
        std::sort(c.begin(), c.end());
        const std::size_t n = c.size();
        policy.fill[j] = (n % 2 == 1) ? c[n / 2]
                                      : 0.5 * (c[n / 2 - 1] + c[n / 2]);
    }
    return policy;
}

namespace {

Eigen::VectorXd imputed(const Eigen::VectorXd& x, const ImputePolicy& impute) {
    Eigen::VectorXd out = x;
    for (Eigen::Index j = 0; j < out.size(); ++j)
        if (std::isnan(out[j])) out[j] = impute.fill[j];
    return out;
}

}  // namespace

DiagnosisDataset build_diagnosis_dataset(const LongitudinalCohort& cohort,
                                         int t_lo, int t_hi,
                                         const ImputePolicy& impute) {
    if (t_lo < 1 || t_hi < t_lo)
        throw ArgumentError("build_diagnosis_dataset: bad time range");
    if (impute.fill.size() != cohort.n_features)
        throw ArgumentError("build_diagnosis_dataset: impute policy dimension");

    std::vector<std::pair<const PatientSeries*, int>> rows;
    for (const auto& p : cohort.patients) {
        for (const auto& [t, label] : p.labels) {
            if (t < t_lo || t > t_hi) continue;
            if (!p.observations.count(t)) continue;
            rows.emplace_back(&p, t);
        }
    }
    if (rows.empty())
        throw DataError("build_diagnosis_dataset: no labeled observations in [" +
                        std::to_string(t_lo) + ", " + std::to_string(t_hi) + "]");

    DiagnosisDataset ds;
    ds.X.resize(static_cast<Eigen::Index>(rows.size()), cohort.n_features);
    ds.y.resize(static_cast<Eigen::Index>(rows.size()));
    ds.provenance.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [p, t] = rows[i];
        ds.X.row(static_cast<Eigen::Index>(i)) =
            imputed(p->observations.at(t), impute).transpose();
        ds.y[static_cast<Eigen::Index>(i)] = p->labels.at(t);
        ds.provenance.push_back({p->patient_id, t});
    }
    return ds;
}

EvolutionDataset build_evolution_dataset(const LongitudinalCohort& cohort,
                                         int t_lo, int t_hi,
                                         const std::vector<int>& selected_indices,
                                         const ImputePolicy& impute) {
    if (selected_indices.empty())
        throw ArgumentError("build_evolution_dataset: selected_indices empty");
    for (int idx : selected_indices)
        if (idx < 1 || idx > cohort.n_features)
            throw ArgumentError("build_evolution_dataset: index " +
                                std::to_string(idx) + " outside 1.." +
                                std::to_string(cohort.n_features));
    if (t_lo < 1 || t_hi < t_lo)
        throw ArgumentError("build_evolution_dataset: bad time range");

    std::vector<std::pair<const PatientSeries*, int>> pairs;
    for (const auto& p : cohort.patients) {
        for (const auto& [t, x] : p.observations) {
            if (t < t_lo || t > t_hi) continue;
            if (p.observations.count(t + 1)) pairs.emplace_back(&p, t);
        }
    }
    if (pairs.empty())
        throw DataError("build_evolution_dataset: no consecutive observation "
                        "pairs in range");

    EvolutionDataset ds;
    ds.selected_indices = selected_indices;
    const auto n = static_cast<Eigen::Index>(pairs.size());
    const auto k = static_cast<Eigen::Index>(selected_indices.size());
    ds.X.resize(n, cohort.n_features);
    ds.Y.resize(n, k);
    ds.provenance.reserve(pairs.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& [p, t] = pairs[static_cast<std::size_t>(i)];
        ds.X.row(i) = imputed(p->observations.at(t), impute).transpose();
        Eigen::VectorXd next = imputed(p->observations.at(t + 1), impute);
        for (Eigen::Index c = 0; c < k; ++c)
            ds.Y(i, c) = next[selected_indices[static_cast<std::size_t>(c)] - 1];
        ds.provenance.push_back({p->patient_id, t});
    }
    return ds;
}

std::pair<LongitudinalCohort, LongitudinalCohort> split_by_time(
    const LongitudinalCohort& cohort, int t_prime) {
    if (t_prime < 1 || t_prime >= cohort.time_points)
        throw ArgumentError("split_by_time: require 1 <= T' < T");

    LongitudinalCohort learning, test;
    learning.n_features = test.n_features = cohort.n_features;
    learning.feature_names = test.feature_names = cohort.feature_names;
    for (const auto& p : cohort.patients) {
        PatientSeries lp{p.patient_id, {}, {}}, tp{p.patient_id, {}, {}};
        for (const auto& [t, x] : p.observations)
            (t <= t_prime ? lp : tp).observations.emplace(t, x);
        for (const auto& [t, y] : p.labels)
            (t <= t_prime ? lp : tp).labels.emplace(t, y);
        if (!lp.observations.empty()) {
            learning.time_points =
                std::max(learning.time_points, lp.observations.rbegin()->first);
            learning.patients.push_back(std::move(lp));
        }
        if (!tp.observations.empty()) {
            test.time_points =
                std::max(test.time_points, tp.observations.rbegin()->first);
            test.patients.push_back(std::move(tp));
        }
    }
    return {std::move(learning), std::move(test)};
}

}  // namespace msprog
