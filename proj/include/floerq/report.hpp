#pragma once

#include <string>
#include <utility>
#include <vector>

namespace floerq {

enum class Severity { note, warning, error };

inline const char* to_string(Severity s)
{
    switch (s) {
    case Severity::note: return "note";
    case Severity::warning: return "warning";
    case Severity::error: return "error";
    }
    return "error";
}

/// Outcome of one named check; `witness` points at the offending data.
struct Finding {
    std::string check;
    Severity severity = Severity::error;
    std::string message;
    std::string witness;
};

/// Report-valued result of the validators: a list of findings, plus the names
/// of the checks that ran.
struct Report {
    std::vector<std::string> checks_run;
    std::vector<Finding> findings;

    bool ok() const
    {
        for (const auto& f : findings)
            if (f.severity == Severity::error)
                return false;
        return true;
    }

    explicit operator bool() const { return ok(); }

    void ran(const std::string& check) { checks_run.push_back(check); }

    void add(std::string check, Severity sev, std::string message, std::string witness = {})
    {
        findings.push_back({std::move(check), sev, std::move(message), std::move(witness)});
    }

    void merge(const Report& other)
    {
        checks_run.insert(checks_run.end(), other.checks_run.begin(), other.checks_run.end());
        findings.insert(findings.end(), other.findings.begin(), other.findings.end());
    }

    /// First error finding, for terse messages.
    const Finding* first_error() const
    {
        for (const auto& f : findings)
            if (f.severity == Severity::error)
                return &f;
        return nullptr;
    }
};

} // namespace floerq
