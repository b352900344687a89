#ifndef NEEDLET_LQ_CSV_HPP
#define NEEDLET_LQ_CSV_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace nlq {

/// First line of every CSV the tools write.
std::string version_line();

/// 17 significant digits, '.' decimal point, locale independent.
std::string format_double(double value);

using CsvCell = std::variant<std::string, double, long long>;

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out, bool with_version = true);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<CsvCell>& cells);

private:
    std::ostream& out_;
};

struct SampleTable {
    Eigen::MatrixXd points;  // d x m
    Eigen::VectorXd targets;
};

/// Reads rows x_1..x_d,y. Lines starting with '#' and a non-numeric header
/// row are skipped. Throws std::runtime_error with the line number on
/// malformed input.
SampleTable read_samples(std::istream& in, int d);

}  // namespace nlq

#endif  // NEEDLET_LQ_CSV_HPP
