#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace factaudit::agents {

enum class PromptRole {
    Appraiser,
    AppraiserJudge,
    Inquirer,
    QualityInspector,
    EvaluatorReference,
    EvaluatorJudge,
    EvaluatorScore,
    Prober,
    Target,
};

const char* to_string(PromptRole role); // "appraiser", "appraiser_judge", ...

// A template with {name} placeholders; the declared placeholder list and
// the placeholders appearing in the text must match exactly.
class PromptTemplate {
public:
    PromptTemplate() = default;
    PromptTemplate(PromptRole role, std::string text, std::vector<std::string> placeholders);

    // Substitutes every placeholder; throws ConfigError when a value is
    // missing or unused keys are supplied.
    std::string render(const std::map<std::string, std::string>& values) const;

    PromptRole role() const noexcept { return role_; }
    const std::string& text() const noexcept { return text_; }
    const std::vector<std::string>& placeholders() const noexcept { return placeholders_; }

    static std::vector<std::string> extract_placeholders(const std::string& text);

private:
    PromptRole role_ = PromptRole::Appraiser;
    std::string text_;
    std::vector<std::string> placeholders_;
};

class PromptCatalog {
public:
    static PromptCatalog defaults();

    // Replaces templates for which <role>.txt exists under dir.
    void apply_overrides(const std::filesystem::path& dir);

    // Writes every template as <role>.txt plus a catalog_version marker.
    void write_to(const std::filesystem::path& dir) const;

    const PromptTemplate& get(PromptRole role) const;

    static constexpr const char* kCatalogVersion = "1";

private:
    std::map<PromptRole, PromptTemplate> templates_;
};

} // namespace factaudit::agents
