int q_sym;
