#include "nlsql/schema.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <limits>
#include <map>

#include "json_util.hpp"
#include "nlsql/error.hpp"

namespace nlsql {

std::string_view to_string(ValueKind kind) {
    switch (kind) {
    case ValueKind::Text: return "text";
    case ValueKind::Integer: return "integer";
    case ValueKind::Real: return "real";
    }
    return "?";
}

std::string_view to_string(TableKind kind) {
    return kind == TableKind::Entity ? "entity" : "relationship";
}

bool is_identifier(std::string_view name) {
    if (name.empty()) return false;
    auto head = static_cast<unsigned char>(name.front());
    if (!std::isalpha(head) && head != '_') return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u == '_';
    });
}

std::string fold_case(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

const Column* Table::find_column(std::string_view column) const {
    const std::string key = fold_case(column);
    for (const Column& c : columns)
        if (fold_case(c.name) == key) return &c;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Schema

Schema::Schema(std::vector<Table> tables) : tables_(std::move(tables)) {
    if (tables_.empty()) throw ConfigError("schema declares no tables");

    std::map<std::string, std::string> seen_tables;
    // folded column name -> first declaring (table, column)
    std::map<std::string, std::pair<const Table*, const Column*>> seen_columns;

    for (const Table& table : tables_) {
        if (!is_identifier(table.name))
            throw ConfigError("invalid table name '" + table.name + "'");
        auto [it, fresh] = seen_tables.emplace(fold_case(table.name), table.name);
        if (!fresh) throw ConfigError("duplicate table '" + table.name + "'");
        if (table.columns.empty())
            throw ConfigError("table '" + table.name + "' has no columns");

        std::map<std::string, bool> local;
        for (const Column& column : table.columns) {
            if (!is_identifier(column.name))
                throw ConfigError("invalid column name '" + column.name + "' in table '" +
                                  table.name + "'");
            const std::string key = fold_case(column.name);
            if (!local.emplace(key, true).second)
                throw ConfigError("duplicate column '" + column.name + "' in table '" +
                                  table.name + "'");
            auto [prior, first] = seen_columns.emplace(key, std::pair{&table, &column});
            if (first) continue;
            const auto& [other_table, other_column] = prior->second;
            if (other_column->name != column.name)
                throw ConfigError("column '" + table.name + "." + column.name +
                                  "' differs in spelling from '" + other_table->name + "." +
                                  other_column->name + "'");
            if (other_column->kind != column.kind)
                throw ConfigError("column '" + column.name + "' is " +
                                  std::string(to_string(column.kind)) + " in table '" +
                                  table.name + "' but " +
                                  std::string(to_string(other_column->kind)) + " in table '" +
                                  other_table->name + "'");
        }
    }
}

std::optional<std::size_t> Schema::index_of(std::string_view table) const {
    const std::string key = fold_case(table);
    for (std::size_t i = 0; i < tables_.size(); ++i)
        if (fold_case(tables_[i].name) == key) return i;
    return std::nullopt;
}

const Table* Schema::find_table(std::string_view table) const {
    auto index = index_of(table);
    return index ? &tables_[*index] : nullptr;
}

Schema load_schema(std::string_view config_text) {
    using detail::Json;
    const Json doc = detail::parse_json(config_text, "schema config");
    detail::check_fields(doc, "schema config", {"tables"}, {"tables"});

    std::vector<Table> tables;
    const Json& table_list = detail::require_array(doc, "tables", "schema config");
    for (std::size_t t = 0; t < table_list.size(); ++t) {
        const Json& entry = table_list[t];
        const std::string context = "tables[" + std::to_string(t) + "]";
        detail::check_fields(entry, context, {"name", "kind", "columns"}, {"name", "columns"});

        Table table;
        table.name = detail::require_string(entry, "name", context);
        if (entry.contains("kind")) {
            const std::string kind = detail::require_string(entry, "kind", context);
            if (kind == "entity") table.kind = TableKind::Entity;
            else if (kind == "relationship") table.kind = TableKind::Relationship;
            else throw ConfigError(context + ": unknown table kind '" + kind + "'");
        }

        const Json& columns = detail::require_array(entry, "columns", context);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const std::string column_context = context + ".columns[" + std::to_string(c) + "]";
            detail::check_fields(columns[c], column_context, {"name", "type"}, {"name", "type"});
            Column column;
            column.name = detail::require_string(columns[c], "name", column_context);
            const std::string type = detail::require_string(columns[c], "type", column_context);
            if (type == "text") column.kind = ValueKind::Text;
            else if (type == "integer") column.kind = ValueKind::Integer;
            else if (type == "real") column.kind = ValueKind::Real;
            else throw ConfigError(column_context + ": unknown value kind '" + type + "'");
            table.columns.push_back(std::move(column));
        }
        tables.push_back(std::move(table));
    }
    return Schema(std::move(tables));
}

std::vector<std::string> tables_owning(const Schema& schema, std::string_view column) {
    std::vector<std::string> entities;
    std::vector<std::string> relationships;
    for (const Table& table : schema.tables()) {
        if (!table.find_column(column)) continue;
        (table.kind == TableKind::Entity ? entities : relationships).push_back(table.name);
    }
    entities.insert(entities.end(), relationships.begin(), relationships.end());
    return entities;
}

// ---------------------------------------------------------------------------
// SchemaGraph

SchemaGraph::SchemaGraph(std::vector<std::string> nodes, std::vector<SchemaEdge> edges)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      adjacency_(nodes_.size()),
      edge_index_(nodes_.size(), std::vector<int>(nodes_.size(), -1)) {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const SchemaEdge& edge = edges_[e];
        edge_index_[edge.a][edge.b] = static_cast<int>(e);
        edge_index_[edge.b][edge.a] = static_cast<int>(e);
        adjacency_[edge.a].push_back(edge.b);
        adjacency_[edge.b].push_back(edge.a);
    }
    for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

std::optional<std::size_t> SchemaGraph::index_of(std::string_view table) const {
    const std::string key = fold_case(table);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (fold_case(nodes_[i]) == key) return i;
    return std::nullopt;
}

const std::vector<std::string>& SchemaGraph::shared(std::size_t a, std::size_t b) const {
    static const std::vector<std::string> none;
    const int e = edge_index_.at(a).at(b);
    return e < 0 ? none : edges_[static_cast<std::size_t>(e)].shared;
}

SchemaGraph build_graph(const Schema& schema) {
    const auto& tables = schema.tables();
    std::vector<std::string> nodes;
    for (const Table& t : tables) nodes.push_back(t.name);

    std::vector<SchemaEdge> edges;
    for (std::size_t a = 0; a < tables.size(); ++a) {
        for (std::size_t b = a + 1; b < tables.size(); ++b) {
            SchemaEdge edge{a, b, {}};
            for (const Column& column : tables[a].columns)
                if (tables[b].find_column(column.name)) edge.shared.push_back(column.name);
            if (!edge.shared.empty()) edges.push_back(std::move(edge));
        }
    }
    return SchemaGraph(std::move(nodes), std::move(edges));
}

// ---------------------------------------------------------------------------
// join_path

namespace {

constexpr int kUnreached = -1;

std::vector<int> bfs_distances(const SchemaGraph& graph, const std::vector<std::size_t>& sources) {
    std::vector<int> dist(graph.nodes().size(), kUnreached);
    std::deque<std::size_t> queue;
    for (std::size_t s : sources) {
        dist[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        const std::size_t node = queue.front();
        queue.pop_front();
        for (std::size_t next : graph.neighbors(node)) {
            if (dist[next] != kUnreached) continue;
            dist[next] = dist[node] + 1;
            queue.push_back(next);
        }
    }
    return dist;
}

// Walks downhill in `dist` from `from` to a distance-0 node, always taking the
// smallest-index neighbour; this is the lexicographically smallest shortest path.
std::vector<std::size_t> descend(const SchemaGraph& graph, const std::vector<int>& dist,
                                 std::size_t from) {
    std::vector<std::size_t> path{from};
    while (dist[path.back()] > 0) {
        const int want = dist[path.back()] - 1;
        for (std::size_t next : graph.neighbors(path.back())) {
            if (dist[next] == want) {
                path.push_back(next);
                break;
            }
        }
    }
    return path;
}

class PlanBuilder {
public:
    explicit PlanBuilder(const SchemaGraph& graph)
        : graph_(graph), selected_(graph.nodes().size(), false) {}

    // path.front() must already be selected unless the plan is empty.
    void add_path(const std::vector<std::size_t>& path) {
        if (order_.empty()) select(path.front());
        for (std::size_t i = 1; i < path.size(); ++i) {
            if (selected_[path[i]]) continue;
            select(path[i]);
            for (const std::string& column : graph_.shared(path[i - 1], path[i])) {
                const std::string& left = graph_.nodes()[path[i - 1]];
                const std::string& right = graph_.nodes()[path[i]];
                plan_.conditions.push_back({left, column, right, column});
            }
        }
    }

    std::vector<std::size_t> selected() const { return order_; }
    bool contains(std::size_t node) const { return selected_[node]; }
    JoinPlan take() { return std::move(plan_); }

private:
    void select(std::size_t node) {
        selected_[node] = true;
        order_.push_back(node);
        plan_.tables.push_back(graph_.nodes()[node]);
    }

    const SchemaGraph& graph_;
    std::vector<bool> selected_;
    std::vector<std::size_t> order_;
    JoinPlan plan_;
};

} // namespace

JoinPlan join_path(const SchemaGraph& graph, const std::vector<std::string>& required) {
    if (required.empty()) throw ResolveError("join planning needs at least one table");

    std::vector<std::size_t> terminals;
    for (const std::string& name : required) {
        auto index = graph.index_of(name);
        if (!index) throw ResolveError("unknown table '" + name + "'");
        terminals.push_back(*index);
    }
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());

    const auto& names = graph.nodes();
    PlanBuilder builder(graph);

    if (terminals.size() == 1) {
        builder.add_path({terminals.front()});
        return builder.take();
    }

    if (terminals.size() == 3) {
        // A minimum tree over three terminals is three shortest paths meeting
        // at one table; pick the meeting table with the smallest total length.
        std::vector<std::vector<int>> dist;
        for (std::size_t t : terminals) dist.push_back(bfs_distances(graph, {t}));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = i + 1; j < 3; ++j)
                if (dist[i][terminals[j]] == kUnreached)
                    throw DisconnectedError(names[terminals[i]], names[terminals[j]]);

        std::size_t center = 0;
        int best = std::numeric_limits<int>::max();
        for (std::size_t c = 0; c < names.size(); ++c) {
            if (dist[0][c] == kUnreached) continue;
            const int total = dist[0][c] + dist[1][c] + dist[2][c];
            if (total < best) {
                best = total;
                center = c;
            }
        }
        const std::vector<int> from_center = bfs_distances(graph, {center});
        builder.add_path(descend(graph, from_center, terminals[0]));
        for (std::size_t i = 1; i < 3; ++i) {
            auto path = descend(graph, from_center, terminals[i]);
            std::reverse(path.begin(), path.end());
            builder.add_path(path);
        }
        return builder.take();
    }

    const std::vector<int> to_second = bfs_distances(graph, {terminals[1]});
    if (to_second[terminals[0]] == kUnreached)
        throw DisconnectedError(names[terminals[0]], names[terminals[1]]);
    builder.add_path(descend(graph, to_second, terminals[0]));

    for (std::size_t i = 2; i < terminals.size(); ++i) {
        if (builder.contains(terminals[i])) continue;
        const std::vector<int> to_tree = bfs_distances(graph, builder.selected());
        if (to_tree[terminals[i]] == kUnreached)
            throw DisconnectedError(names[terminals[0]], names[terminals[i]]);
        auto path = descend(graph, to_tree, terminals[i]);
        std::reverse(path.begin(), path.end());
        builder.add_path(path);
    }
    return builder.take();
}

} // namespace nlsql
