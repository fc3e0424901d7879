/// Regenerates the frozen tables under data/.  Run from anywhere:
///   fmlab-baseline [output-dir]
/// Defaults to the source tree's data/ directory.

#include <iostream>
#include <string>

#include "fmlab/structure_io.hpp"
#include "fmlab/twinwidth.hpp"

using fmlab::ordered_json;

int main(int argc, char** argv) {
    std::string dir;
    if (argc > 1) dir = argv[1];
#ifdef FMLAB_SOURCE_DIR
    if (dir.empty()) dir = std::string(FMLAB_SOURCE_DIR) + "/data";
#endif
    if (dir.empty()) {
        std::cerr << "usage: fmlab-baseline <output-dir>\n";
        return 1;
    }

    {
        ordered_json rows = ordered_json::array();
        for (const fmlab::Structure& g : fmlab::graph_corpus(6)) {
            int e = g.signature().relation_index("E");
            fmlab::WidthResult r = fmlab::twin_width(g);
            if (r.mode != fmlab::WidthMode::exact) {
                std::cerr << g.name() << ": not solved exactly\n";
                return 1;
            }
            ordered_json row;
            row["n"] = g.sort_size(0);
            row["edges"] = static_cast<int>(g.tuple_count(e)) / 2;
            row["width"] = r.width;
            rows.push_back(std::move(row));
        }
        fmlab::write_text_file(dir + "/tww_baseline_le6.json", rows.dump(2) + "\n");
        std::cout << "wrote " << rows.size() << " width rows\n";
    }

    {
        fmlab::TwwOptions opts;
        opts.exact_bound = 16;
        opts.threads = 4;
        fmlab::TransferReport rep =
            fmlab::transfer_experiment(fmlab::graph_corpus(4), fmlab::graph_corpus(3), opts);
        ordered_json out;
        out["left_max_n"] = 4;
        out["right_max_n"] = 3;
        out["assignments"] = rep.assignments;
        out["max_excess"] = rep.max_excess;
        ordered_json rows = ordered_json::array();
        for (const fmlab::TransferRow& r : rep.rows) {
            ordered_json row;
            row["spine"] = r.spine;
            row["ribs"] = r.ribs;
            row["spine_width"] = r.spine_width;
            row["max_rib_width"] = r.max_rib_width;
            row["sum_width"] = r.sum_width;
            row["excess"] = r.excess;
            row["multiplicity"] = r.multiplicity;
            rows.push_back(std::move(row));
        }
        out["rows"] = std::move(rows);
        fmlab::write_text_file(dir + "/tww_transfer_baseline.json", out.dump(2) + "\n");
        std::cout << "wrote " << rep.rows.size() << " transfer rows ("
                  << rep.assignments << " assignments, max excess " << rep.max_excess << ")\n";
    }
    return 0;
}
