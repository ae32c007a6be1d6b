#pragma once

// LTE-U gateway access control: microcell registration, per-cell user lists,
// handoff-time access checks and owner-granted temporary access that lasts
// for one call or data session.

#include <lteu/common.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lteu::auth {

using UserId = std::string;
using SessionId = std::int64_t;

struct AccessGrant
{
  enum class Kind { permanent, temporary };

  UserId user;
  CellId cell{};
  Kind kind = Kind::permanent;
  std::optional<SessionId> session; ///< set iff kind == temporary
  double granted_at_s = 0.0;

  friend bool operator==(const AccessGrant&, const AccessGrant&) = default;
};

struct AccessRequest
{
  UserId user;
  SessionId session = 0;
  double requested_at_s = 0.0;

  friend bool operator==(const AccessRequest&, const AccessRequest&) = default;
};

struct MicrocellRecord
{
  UserId owner;
  bool open_access = false; ///< operator-owned: every user admitted
  std::set<UserId> authorized_users;
  std::vector<AccessRequest> pending_requests;
  std::vector<AccessGrant> temporary_grants;

  friend bool operator==(const MicrocellRecord&, const MicrocellRecord&) = default;
};

class GatewayRegistry
{
public:
  explicit GatewayRegistry(int gateway_id = 0) : gateway_id_(gateway_id) {}

  int gateway_id() const { return gateway_id_; }

  void register_microcell(CellId cell, const UserId& owner, const std::set<UserId>& initial_users);

  /// An operator-owned cell that admits everyone.
  void register_open_microcell(CellId cell, const UserId& operator_id);

  bool is_registered(CellId cell) const { return cells_.contains(cell); }

  /// Only the cell owner may administer its user list.
  void add_authorized_user(CellId cell, const UserId& admin, const UserId& user);

  bool check_access(CellId cell, const UserId& user, double t_s) const;

  /// Queues a request; repeated requests for the same session are coalesced.
  const AccessRequest& request_temp_access(CellId cell, const UserId& user, SessionId session, double t_s = 0.0);

  /// Owner grants the oldest pending request from `user`.
  AccessGrant grant_temp_access(CellId cell, const UserId& admin, const UserId& user, double t_s = 0.0);

  /// Expires every grant and drops every request tied to `session`.
  void end_session(SessionId session);

  bool has_pending_request(CellId cell, const UserId& user) const;

  const MicrocellRecord& record(CellId cell) const;
  const std::map<CellId, MicrocellRecord>& cells() const { return cells_; }

  friend bool operator==(const GatewayRegistry&, const GatewayRegistry&) = default;

private:
  MicrocellRecord& mutable_record(CellId cell);
  bool is_authorized(const MicrocellRecord& rec, const UserId& user, double t_s) const;

  int gateway_id_;
  std::map<CellId, MicrocellRecord> cells_;
};

} // namespace lteu::auth
