#include "geoindex/report.hpp"

#include <Eigen/Dense>
#include <iomanip>
#include <ios>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace geoindex::report {

namespace {

using nlohmann::json;

// Exact: enough digits to reconstruct the double bit-for-bit.
std::string fmt_exact(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// Terminal-friendly.
std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::string fmt_vector(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += fmt(values[i]);
    }
    return out + "]";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

json verify_body(const indexform::IndexReport& rep) {
    json j;
    j["mu_galerkin"] = rep.mu_galerkin;
    j["conjugate_total"] = rep.conjugate_total;
    j["crossing_signature_sum"] = rep.crossing_signature_sum;
    j["agree"] = rep.agree;
    j["crossings"] = json::array();
    for (const auto& d : rep.diagnostics) {
        json c;
        c["lambda0"] = d.lambda0;
        c["multiplicity"] = d.multiplicity;
        c["closed_form"] = d.closed_form;
        c["finite_diff"] = d.finite_diff;
        j["crossings"].push_back(c);
    }
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string conjugate_text(const jacobi::ConjugateReport& rep) {
    std::ostringstream os;
    if (rep.points.empty()) {
        os << "no conjugate instants in (0, 1)\n";
    } else {
        os << std::left << std::setw(18) << "t" << "multiplicity\n";
        for (const auto& p : rep.points)
            os << std::left << std::setw(18) << fmt(p.t) << p.multiplicity << "\n";
    }
    os << "total " << rep.total << "; endpoint "
       << (rep.nondegenerate ? "nondegenerate" : "DEGENERATE") << "\n";
    return os.str();
}

std::string conjugate_json(const jacobi::ConjugateReport& rep) {
    json j;
    j["schema"] = 1;
    j["kind"] = "conjugate";
    j["nondegenerate"] = rep.nondegenerate;
    j["total"] = rep.total;
    j["points"] = json::array();
    for (const auto& p : rep.points)
        j["points"].push_back({{"t", p.t}, {"multiplicity", p.multiplicity}});
    return dump(j);
}

std::string conjugate_csv(const jacobi::JacobiSolution& sol) {
    std::ostringstream os;
    os << "t,det_J,sigma_min\n";
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        const Eigen::MatrixXd& j = sol.J[i];
        double det, smin;
        if (sol.dim() == 1) {
            det = j(0, 0);
            smin = std::abs(det);
        } else {
            det = Eigen::PartialPivLU<Eigen::MatrixXd>(j).determinant();
            smin = j.jacobiSvd().singularValues().minCoeff();
        }
        os << fmt_exact(sol.grid[i]) << "," << fmt_exact(det) << "," << fmt_exact(smin)
           << "\n";
    }
    return os.str();
}

std::string index_text(int mu) { return std::to_string(mu) + "\n"; }

std::string index_json(int mu) {
    json j;
    j["schema"] = 1;
    j["kind"] = "index";
    j["mu"] = mu;
    return dump(j);
}

std::string index_csv(int mu) { return "mu\n" + std::to_string(mu) + "\n"; }

std::string crossings_text(const std::vector<Crossing>& crossings) {
    std::ostringstream os;
    if (crossings.empty()) return "no crossings in (0, 1)\n";
    os << std::left << std::setw(18) << "lambda0" << std::setw(14) << "multiplicity"
       << "signature\n";
    for (const auto& c : crossings)
        os << std::left << std::setw(18) << fmt(c.lambda0) << std::setw(14) << c.kernel_dim()
           << c.signature << "\n";
    return os.str();
}

std::string crossings_json(const std::vector<Crossing>& crossings) {
    json j;
    j["schema"] = 1;
    j["kind"] = "crossings";
    j["crossings"] = json::array();
    for (const auto& c : crossings) {
        json e;
        e["lambda0"] = c.lambda0;
        e["multiplicity"] = c.kernel_dim();
        e["signature"] = c.signature;
        e["form_eigenvalues"] = c.form_eigenvalues;
        j["crossings"].push_back(e);
    }
    return dump(j);
}

std::string crossings_csv(const SymMatrixPath& path, int grid_size) {
    if (grid_size < 2) throw std::invalid_argument("crossings_csv: grid_size must be >= 2");
    std::ostringstream os;
    os << "lambda";
    for (int i = 1; i <= path.dim; ++i) os << ",nu_" << i;
    os << "\n";
    for (int i = 0; i <= grid_size; ++i) {
        const double lambda = static_cast<double>(i) / grid_size;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(path.eval(lambda).mat(),
                                                          Eigen::EigenvaluesOnly);
        os << fmt_exact(lambda);
        for (int k = 0; k < path.dim; ++k) os << "," << fmt_exact(es.eigenvalues()(k));
        os << "\n";
    }
    return os.str();
}

std::string verify_text(const indexform::IndexReport& rep) {
    std::ostringstream os;
    os << "mu (Galerkin)           " << rep.mu_galerkin << "\n"
       << "conjugate point total   " << rep.conjugate_total << "\n"
       << "crossing signature sum  " << rep.crossing_signature_sum << "\n"
       << "agree                   " << yes_no(rep.agree) << "\n";
    if (!rep.diagnostics.empty()) {
        os << "crossings:\n";
        for (const auto& d : rep.diagnostics)
            os << "  lambda0 " << std::left << std::setw(16) << fmt(d.lambda0)
               << " multiplicity " << d.multiplicity << "  closed " << fmt_vector(d.closed_form)
               << "  fd " << fmt_vector(d.finite_diff) << "\n";
    }
    return os.str();
}

std::string verify_json(const indexform::IndexReport& rep) {
    json j = verify_body(rep);
    j["schema"] = 1;
    j["kind"] = "verify";
    return dump(j);
}

std::string verify_csv(const indexform::IndexReport& rep) {
    std::ostringstream os;
    os << "lambda0,multiplicity,closed_form,finite_diff\n";
    for (const auto& d : rep.diagnostics)
        for (std::size_t i = 0; i < d.closed_form.size(); ++i)
            os << fmt_exact(d.lambda0) << "," << d.multiplicity << ","
               << fmt_exact(d.closed_form[i]) << "," << fmt_exact(d.finite_diff[i]) << "\n";
    return os.str();
}

std::string suite_text(const suite::SuiteReport& rep) {
    std::ostringstream os;
    os << std::left << std::setw(7) << "trial" << std::setw(11) << "fiber_dim" << std::setw(9)
       << "redraws" << std::setw(5) << "mu" << std::setw(7) << "total" << std::setw(9)
       << "sig_sum" << "agree\n";
    for (const auto& t : rep.trials)
        os << std::left << std::setw(7) << t.trial << std::setw(11) << t.fiber_dim
           << std::setw(9) << t.redraws << std::setw(5) << t.report.mu_galerkin << std::setw(7)
           << t.report.conjugate_total << std::setw(9) << t.report.crossing_signature_sum
           << yes_no(t.report.agree) << "\n";
    os << rep.requested << " trials, seed " << rep.seed << ", rng " << rep.rng_name << ": "
       << (rep.all_agree ? "all agree" : "DISAGREEMENT") << "; total redraws "
       << rep.total_redraws << "\n";
    return os.str();
}

std::string suite_json(const suite::SuiteReport& rep) {
    json j;
    j["schema"] = 1;
    j["kind"] = "suite";
    j["rng"] = rep.rng_name;
    j["seed"] = rep.seed;
    j["requested"] = rep.requested;
    j["total_redraws"] = rep.total_redraws;
    j["all_agree"] = rep.all_agree;
    j["trials"] = json::array();
    for (const auto& t : rep.trials) {
        json e;
        e["trial"] = t.trial;
        e["fiber_dim"] = t.fiber_dim;
        e["redraws"] = t.redraws;
        e["verify"] = verify_body(t.report);
        j["trials"].push_back(e);
    }
    return dump(j);
}

std::string suite_csv(const suite::SuiteReport& rep) {
    std::ostringstream os;
    os << "trial,fiber_dim,redraws,mu,conjugate_total,signature_sum,agree\n";
    for (const auto& t : rep.trials)
        os << t.trial << "," << t.fiber_dim << "," << t.redraws << "," << t.report.mu_galerkin
           << "," << t.report.conjugate_total << "," << t.report.crossing_signature_sum << ","
           << (t.report.agree ? 1 : 0) << "\n";
    return os.str();
}

std::string error_text(const std::string& kind, const std::string& message) {
    return "error (" + kind + "): " + message + "\n";
}

std::string error_json(const std::string& kind, const std::string& message) {
    json j;
    j["schema"] = 1;
    j["kind"] = "error";
    j["error"] = {{"kind", kind}, {"message", message}};
    return dump(j);
}

}  // namespace geoindex::report
