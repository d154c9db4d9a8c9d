// implementation pending
namespace rcbij {}
