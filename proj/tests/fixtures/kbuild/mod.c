int mod_sym;
