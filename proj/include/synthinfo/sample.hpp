#pragma once

#include <optional>
#include <vector>

#include "synthinfo/errors.hpp"

namespace synthinfo {

// Ordered collection of scalar observations, with optional class labels.
struct Sample {
    std::vector<double> observations;
    std::optional<std::vector<int>> labels;

    Sample() = default;
    explicit Sample(std::vector<double> obs) : observations(std::move(obs)) {}
    Sample(std::vector<double> obs, std::vector<int> labs)
        : observations(std::move(obs)), labels(std::move(labs)) {
        validate();
    }

    std::size_t size() const { return observations.size(); }
    bool empty() const { return observations.empty(); }
    bool has_labels() const { return labels.has_value(); }

    void validate() const {
        if (labels && labels->size() != observations.size())
            throw SchemaError("labels length does not match observations length");
    }

    void append(const Sample& other) {
        observations.insert(observations.end(), other.observations.begin(),
                            other.observations.end());
        if (labels && other.labels)
            labels->insert(labels->end(), other.labels->begin(), other.labels->end());
        else
            labels.reset();
    }
};

inline Sample pooled(const Sample& a, const Sample& b) {
    Sample out = a;
    out.append(b);
    return out;
}

}  // namespace synthinfo
