// scirec-synth: write a deterministic synthetic corpus as JSONL.

#include <iostream>

#include <CLI11.hpp>

#include "scirec/corpus.hpp"
#include "scirec/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic corpus with exact paper/keyword/citation/state counts"};
    scirec::SyntheticShape shape;
    std::string out;
    app.add_option("--out", out, "Output JSONL file")->required();
    app.add_option("--papers", shape.papers);
    app.add_option("--keywords", shape.keywords);
    app.add_option("--citations", shape.citations);
    app.add_option("--states", shape.states);
    app.add_option("--seed", shape.seed);
    CLI11_PARSE(app, argc, argv);

    try {
        const auto records = scirec::generate_synthetic(shape);
        scirec::write_jsonl(records, out);
        std::cout << "wrote " << records.size() << " papers to " << out << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
