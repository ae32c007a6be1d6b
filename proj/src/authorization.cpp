#include <lteu/authorization.hpp>

#include <algorithm>
#include <utility>

namespace lteu::auth {

namespace {

std::string
cell_name(CellId cell)
{
  return std::to_string(to_int(cell));
}

} // namespace

void
GatewayRegistry::register_microcell(CellId cell, const UserId& owner, const std::set<UserId>& initial_users)
{
  if (cells_.contains(cell))
    {
      throw Error("microcell " + cell_name(cell) + " is already registered");
    }
  MicrocellRecord rec;
  rec.owner = owner;
  rec.authorized_users = initial_users;
  rec.authorized_users.insert(owner);
  cells_.emplace(cell, std::move(rec));
}

void
GatewayRegistry::register_open_microcell(CellId cell, const UserId& operator_id)
{
  register_microcell(cell, operator_id, {});
  cells_.at(cell).open_access = true;
}

const MicrocellRecord&
GatewayRegistry::record(CellId cell) const
{
  auto it = cells_.find(cell);
  if (it == cells_.end())
    {
      throw Error("microcell " + cell_name(cell) + " is not registered");
    }
  return it->second;
}

MicrocellRecord&
GatewayRegistry::mutable_record(CellId cell)
{
  return const_cast<MicrocellRecord&>(std::as_const(*this).record(cell));
}

void
GatewayRegistry::add_authorized_user(CellId cell, const UserId& admin, const UserId& user)
{
  auto& rec = mutable_record(cell);
  if (admin != rec.owner)
    {
      throw PermissionError(admin + " does not administer microcell " + cell_name(cell));
    }
  rec.authorized_users.insert(user);
}

bool
GatewayRegistry::is_authorized(const MicrocellRecord& rec, const UserId& user, double t_s) const
{
  if (rec.open_access || rec.authorized_users.contains(user))
    {
      return true;
    }
  return std::any_of(rec.temporary_grants.begin(), rec.temporary_grants.end(), [&](const AccessGrant& g) {
    return g.user == user && g.granted_at_s <= t_s;
  });
}

bool
GatewayRegistry::check_access(CellId cell, const UserId& user, double t_s) const
{
  return is_authorized(record(cell), user, t_s);
}

const AccessRequest&
GatewayRegistry::request_temp_access(CellId cell, const UserId& user, SessionId session, double t_s)
{
  auto& rec = mutable_record(cell);
  if (rec.open_access || rec.authorized_users.contains(user))
    {
      throw Error(user + " is already authorized for microcell " + cell_name(cell));
    }
  auto it = std::find_if(rec.pending_requests.begin(), rec.pending_requests.end(), [&](const AccessRequest& r) {
    return r.user == user && r.session == session;
  });
  if (it != rec.pending_requests.end())
    {
      return *it;
    }
  rec.pending_requests.push_back(AccessRequest{user, session, t_s});
  return rec.pending_requests.back();
}

AccessGrant
GatewayRegistry::grant_temp_access(CellId cell, const UserId& admin, const UserId& user, double t_s)
{
  auto& rec = mutable_record(cell);
  if (admin != rec.owner)
    {
      throw PermissionError(admin + " cannot grant access to microcell " + cell_name(cell));
    }
  auto it = std::find_if(rec.pending_requests.begin(), rec.pending_requests.end(),
                         [&](const AccessRequest& r) { return r.user == user; });
  if (it == rec.pending_requests.end())
    {
      throw Error("no pending access request from " + user + " for microcell " + cell_name(cell));
    }
  AccessGrant grant{user, cell, AccessGrant::Kind::temporary, it->session, t_s};
  rec.pending_requests.erase(it);
  rec.temporary_grants.push_back(grant);
  return grant;
}

void
GatewayRegistry::end_session(SessionId session)
{
  for (auto& [cell, rec] : cells_)
    {
      std::erase_if(rec.temporary_grants, [&](const AccessGrant& g) { return g.session == session; });
      std::erase_if(rec.pending_requests, [&](const AccessRequest& r) { return r.session == session; });
    }
}

bool
GatewayRegistry::has_pending_request(CellId cell, const UserId& user) const
{
  const auto& rec = record(cell);
  return std::any_of(rec.pending_requests.begin(), rec.pending_requests.end(),
                     [&](const AccessRequest& r) { return r.user == user; });
}

} // namespace lteu::auth
